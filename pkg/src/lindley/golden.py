"""Published reference values for the birth-ratio and coin-tossing examples."""

BIRTH = dict(y=28298, n=56099, theta0=0.5)
COIN = dict(y=9, n=12, theta0=0.5)

# name -> (printed value, absolute tolerance)
SCALARS = {
    "birth_exact_binomial_p": (0.01812363, 1e-6),
    "birth_normal_approx_p": (0.01793329, 1e-6),
    "birth_normal_approx_lower_p": (0.9820667, 1e-6),
    "birth_two_sided_p": (0.03586658, 1e-6),
    "birth_point_mass_pop": (0.9543474, 1e-6),
    "birth_beta11_pop": (0.01793728, 1e-6),
    "coin_binomial_p": (0.07299805, 1e-6),
    "coin_negbinom_p": (0.03271484, 1e-6),
}

# alpha = beta -> posterior probability of theta <= 0.5, birth data
TABLE1 = [
    (1.0, 0.01793728),
    (0.1, 0.01793580),
    (0.01, 0.01793565),
    (0.001, 0.01793564),
    (0.0001, 0.01793563),
    (0.00001, 0.01793563),
    (0.000001, 0.01793563),
]
TABLE1_TOL = 5e-9

# alpha = beta -> posterior probability of theta <= 0.5, coin data
TABLE2 = [
    (2.0, 0.059235),
    (1.5, 0.052752),
    (1.0, 0.046143),
    (0.9, 0.044809),
    (0.8, 0.043471),
    (0.7, 0.042131),
    (0.6, 0.040789),
    (0.5, 0.039445),
    (0.4, 0.038099),
    (0.3, 0.036753),
    (0.2, 0.035406),
    (0.1, 0.034060),
    (0.01, 0.032849),
    (0.001, 0.032728),
    (0.0001, 0.032716),
    (0.00001, 0.032715),
    (0.000001, 0.032715),
]
TABLE2_TOL = 5e-7

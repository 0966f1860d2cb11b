"""
hecke: twisted involutions of extended Weyl groups and their Hecke modules

Modules, bottom-up: coeff (exact Laurent arithmetic), rootdata (Cartan data and
W), torusquot (points of the torus quotient, W_lambda, minimal cosets),
extweyl (m-twisted involutions and blocks), heckemod (the module action and
its block-transport oracle), barcanon (bar operator, canonical basis),
fforacle (finite-field counting checks), suites, serialize, cli.
"""

__version__ = "1.0.0"

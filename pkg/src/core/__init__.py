"""
Numerical core: operators, states, divergences, retrodiction and
observational entropies.
"""

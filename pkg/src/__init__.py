"""
Observational entropy with quantum reference priors.
"""

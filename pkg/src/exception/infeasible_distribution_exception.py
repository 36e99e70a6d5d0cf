class InfeasibleDistributionException(Exception):
    pass

class InvalidDistributionException(Exception):
    pass

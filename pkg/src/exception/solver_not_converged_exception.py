class SolverNotConvergedException(Exception):
    pass

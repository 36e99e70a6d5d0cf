from contextlib import contextmanager

from fastapi import HTTPException, status
from loguru import logger
from pydantic import ValidationError

from exception.domain_exception import DomainException
from exception.infeasible_distribution_exception import InfeasibleDistributionException
from exception.invalid_channel_exception import InvalidChannelException
from exception.invalid_distribution_exception import InvalidDistributionException
from exception.solver_not_converged_exception import SolverNotConvergedException
from scheme.channel.channel_scheme import ChannelKind


def check_kind(kind: str) -> str:
    if kind not in ChannelKind.ALL:
        raise HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail=f"Unknown channel kind {kind!r}, expected one of {', '.join(ChannelKind.ALL)}",
        )
    return kind


@contextmanager
def domain_errors():
    """Input problems answer 422, infeasible distributions 409."""
    try:
        yield
    except ValidationError as e:
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=e.errors())
    except (InvalidChannelException, InvalidDistributionException, DomainException) as e:
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(e))
    except InfeasibleDistributionException as e:
        raise HTTPException(status_code=status.HTTP_409_CONFLICT, detail=str(e))
    except SolverNotConvergedException as e:
        logger.error(f"Solver failure: {e}")
        raise HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail=str(e))

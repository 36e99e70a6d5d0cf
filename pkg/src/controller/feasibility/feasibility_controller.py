from fastapi import APIRouter
from fastapi_versioning import version

from model.channel.channel_model import canonicalize, from_upload
from model.feasibility import feasibility_model
from model.file.distribution_file_model import to_distribution
from scheme.distribution.distribution_scheme import FeasibilityUpload
from scheme.feasibility.feasibility_scheme import FeasibilityReport
from util.http_errors import check_kind, domain_errors

router = APIRouter()


@router.post("/{kind}", response_model=FeasibilityReport)
@version(1)
def check_feasibility(kind: str, upload: FeasibilityUpload):
    """
    Mean condition and stop-loss slacks of the law of S against the
    canonical form of the channel. An infeasible S is reported, not rejected.
    """
    check_kind(kind)
    with domain_errors():
        spec, _ = from_upload(upload.channel)
        S = to_distribution(upload.distribution, spec, kind)
        canonical, reduction = canonicalize(spec, kind, clamp=False)
        return feasibility_model.check(S.reflect() if reduction.flipped else S, canonical, kind)

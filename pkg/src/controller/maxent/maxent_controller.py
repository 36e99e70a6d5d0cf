from fastapi import APIRouter
from fastapi_versioning import version

from model.channel.channel_model import canonicalize, from_upload
from model.maxent import maxent_model
from scheme.channel.channel_scheme import ChannelUpload
from util.http_errors import check_kind, domain_errors

router = APIRouter()


@router.post("/{kind}", response_model=dict)
@version(1)
def solve_maxent(kind: str, channel: ChannelUpload):
    """Maximum-entropy law of S for the canonical channel."""
    check_kind(kind)
    with domain_errors():
        spec, _ = from_upload(channel)
        canonical, reduction = canonicalize(spec, kind)
        solution = maxent_model.solve_gamma(canonical, kind)
    return {**solution.to_json_dict(), "flipped": reduction.flipped, "h": canonical.h, "alpha": canonical.alpha}

from fastapi import APIRouter
from fastapi_versioning import version

from model.channel import channel_model
from scheme.channel.channel_scheme import CanonicalizeRead, CanonicalizeUpload, ChannelSpec, RawChannelSpec
from util.http_errors import check_kind, domain_errors

router = APIRouter()


@router.post("/normalize", response_model=ChannelSpec)
@version(1)
def normalize_channel(raw: RawChannelSpec):
    """
    Raw gains, peak intensities and noise to the normalized channel
    (gains summing to 1, noise in units of the total peak).
    """
    with domain_errors():
        return channel_model.normalize(raw)


@router.post("/canonicalize", response_model=CanonicalizeRead)
@version(1)
def canonicalize_channel(upload: CanonicalizeUpload):
    check_kind(upload.kind)
    with domain_errors():
        spec, _ = channel_model.from_upload(upload.channel)
        canonical, reduction = channel_model.canonicalize(spec, upload.kind, clamp=upload.clamp)
    return CanonicalizeRead(channel=canonical, reduction=reduction)

from fastapi import APIRouter
from fastapi_versioning import version

from model.bounds import bounds_model
from model.channel.channel_model import from_upload
from scheme.bounds.bounds_scheme import BoundsSweep, BoundsUpload, SweepConfig
from util.http_errors import check_kind, domain_errors

router = APIRouter()


@router.post("/{kind}", response_model=BoundsSweep)
@version(1)
def sweep_bounds(kind: str, upload: BoundsUpload):
    check_kind(kind)
    with domain_errors():
        spec, _ = from_upload(upload.channel)
        config = SweepConfig(sigma_min=upload.sigma_min, sigma_max=upload.sigma_max, points=upload.points, kind=kind)
        # Sequential inside the request worker
        return bounds_model.sweep(spec, config, n_jobs=1)

from fastapi import APIRouter
from fastapi_versioning import version

from model.channel.channel_model import from_upload
from model.decomposition import decomposition_model
from model.file.distribution_file_model import to_distribution
from scheme.decomposition.decomposition_scheme import DecompositionRead, DecompositionRow, DecompositionUpload
from util.http_errors import check_kind, domain_errors

router = APIRouter()


@router.post("/{kind}", response_model=DecompositionRead)
@version(1)
def decompose_signals(kind: str, upload: DecompositionUpload):
    """
    Per-antenna signals for the given realizations of S. Answers 409 when S
    cannot be decomposed over the channel.
    """
    check_kind(kind)
    with domain_errors():
        spec, peaks = from_upload(upload.channel)
        S = to_distribution(upload.distribution, spec, kind)
        plan = decomposition_model.plan_signaling(S, spec, kind, peaks)
        x = decomposition_model.signal(plan, upload.s, upload.method)
        x_raw = decomposition_model.raw_signal(plan, upload.s, upload.method) if peaks is not None else None

    rows = [
        DecompositionRow(s=s, x=x[i].tolist(), x_raw=x_raw[i].tolist() if x_raw is not None else None)
        for i, s in enumerate(upload.s)
    ]
    return DecompositionRead(plan=decomposition_model.plan_to_json(plan), allocation=plan.allocation, rows=rows)

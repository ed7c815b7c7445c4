import logging
from typing import List

from fastapi import APIRouter, HTTPException, status

from vilenkin_lab.common import bad_request
from vilenkin_lab.errors import VilenkinLabError
from vilenkin_lab.schemas.requests import KernelRequest, KernelValue
from vilenkin_lab.services.lab_service import kernel_records, make_kernel, resolve_config

logger = logging.getLogger(__name__)

# Create router
router = APIRouter(prefix="/kernels", tags=["kernels"])


@router.post("", response_model=List[KernelValue])
def build_kernel_values(request: KernelRequest):
    """
    Evaluate a Dirichlet, Fejér, Nörlund or T kernel on every coset.

    Raises:
        HTTPException: 400 for an invalid configuration or kernel index
    """
    try:
        cfg = resolve_config(request.radix, request.resolution)
        kernel = make_kernel(request.kind, request.n, cfg, request.weights, request.variant, request.closed)
        return kernel_records(kernel)
    except HTTPException:
        raise
    except VilenkinLabError as e:
        raise bad_request(e)
    except Exception as e:
        logger.exception("Error building kernel")
        raise HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail=str(e))

import logging
from typing import List

from fastapi import APIRouter, HTTPException, status

from vilenkin_lab.common import bad_request
from vilenkin_lab.errors import VilenkinLabError
from vilenkin_lab.schemas.reports import IdentityReport
from vilenkin_lab.schemas.requests import IdentityRequest
from vilenkin_lab.services.lab_service import resolve_config, run_identities

logger = logging.getLogger(__name__)

# Create router
router = APIRouter(prefix="/identities", tags=["identities"])


@router.post("", response_model=List[IdentityReport])
def check_identities(request: IdentityRequest):
    """Exhaustive kernel identity sweep; one report per parameter tuple."""
    try:
        cfg = resolve_config(request.radix, request.resolution)
        return run_identities(request.identity, cfg, request.weights)
    except HTTPException:
        raise
    except VilenkinLabError as e:
        raise bad_request(e)
    except Exception as e:
        logger.exception("Error checking identities")
        raise HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail=str(e))

import logging

from fastapi import APIRouter, HTTPException, status

from vilenkin_lab.common import bad_request
from vilenkin_lab.errors import VilenkinLabError
from vilenkin_lab.schemas.reports import ConvergenceCurve
from vilenkin_lab.schemas.requests import NormConvergenceRequest
from vilenkin_lab.services.lab_service import resolve_config, run_norm_convergence

logger = logging.getLogger(__name__)

# Create router
router = APIRouter(prefix="/experiments", tags=["experiments"])


@router.post("/norm-convergence", response_model=ConvergenceCurve)
def norm_convergence_curve(request: NormConvergenceRequest):
    """
    Run a norm-convergence experiment.

    Args:
        request: configuration, mean family, weights, exponent, fixture and n grid

    Returns:
        ConvergenceCurve: ‖mean_n f − f‖_p over the grid
    """
    try:
        cfg = resolve_config(request.radix, request.resolution)
        return run_norm_convergence(
            cfg,
            family=request.family,
            weights=request.weights,
            alpha=request.alpha,
            p=request.p,
            fixture=request.fixture,
            seed=request.seed,
            n=request.n,
        )
    except HTTPException:
        raise
    except VilenkinLabError as e:
        raise bad_request(e)
    except Exception as e:
        logger.exception("Error running norm convergence")
        raise HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail=str(e))

import logging

from vilenkin_lab.common import app
from vilenkin_lab.routers.experiments.endpoints import router as ExperimentsEndpoints
from vilenkin_lab.routers.identities.endpoints import router as IdentitiesEndpoints
from vilenkin_lab.routers.kernels.endpoints import router as KernelsEndpoints

logger = logging.getLogger(__name__)

# Include routers
app.include_router(KernelsEndpoints)
app.include_router(IdentitiesEndpoints)
app.include_router(ExperimentsEndpoints)


@app.get("/health")
async def health():
    return {"ok": True}

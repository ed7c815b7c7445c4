import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI, HTTPException, status
from fastapi.middleware.cors import CORSMiddleware

from vilenkin_lab.config import settings
from vilenkin_lab.errors import VilenkinLabError

logger = logging.getLogger(__name__)


def configure_logging(level: str = None) -> None:
    logging.basicConfig(
        level=(level or settings.log_level).upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


@asynccontextmanager
async def lifespan(app: FastAPI):
    # Startup
    configure_logging()
    logger.info("vilenkin-lab API starting (environment=%s)", settings.environment)
    yield
    logger.info("vilenkin-lab API shutting down")


app = FastAPI(title="vilenkin-lab", lifespan=lifespan)

# Configure CORS
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


def bad_request(e: VilenkinLabError) -> HTTPException:
    """Map a library error to a 400 response."""
    logger.warning("rejected request: %s", e)
    return HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))

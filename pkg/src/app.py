import uvicorn
from fastapi import FastAPI
from fastapi_versioning import VersionedFastAPI
from starlette.middleware import Middleware
from starlette.middleware.cors import CORSMiddleware

from controller.bounds import bounds_controller
from controller.channel import channel_controller
from controller.decomposition import decomposition_controller
from controller.feasibility import feasibility_controller
from controller.maxent import maxent_controller
from infra.env import API_HOST, API_PORT

app = FastAPI(title="oic-bounds")

# Channel
app.include_router(channel_controller.router, tags=["channel"], prefix="/channel")

# Signaling
app.include_router(feasibility_controller.router, tags=["feasibility"], prefix="/feasibility")
app.include_router(decomposition_controller.router, tags=["decomposition"], prefix="/decomposition")

# Capacity
app.include_router(maxent_controller.router, tags=["maxent"], prefix="/maxent")
app.include_router(bounds_controller.router, tags=["bounds"], prefix="/bounds")


@app.get("/healthcheck")
def healthcheck():
    return {"status": "ok"}


app = VersionedFastAPI(
    app,
    version_format="{major}",
    prefix_format="/api/v{major}",
    middleware=[
        Middleware(
            CORSMiddleware,
            allow_origins=["*"],
            allow_methods=["POST", "GET"],
            allow_headers=["*"],
        )
    ]
)

if __name__ == "__main__":
    uvicorn.run("app:app", host=API_HOST, port=API_PORT, reload=True)

"""Tiled video outpainting: window planning, Gaussian merging, DDIM dispatch."""

from .blending import gaussian_weights, merge_windows
from .conditioning import ConditioningBundle, ModelInput, assemble_model_input, build_bundle, layout_tokens
from .diffusion import (
    DenoiserRequest,
    DenoiserResponse,
    NoiseSchedule,
    cfg_combine,
    ddim_step,
    make_schedule,
    oracle_denoiser,
    procedural_denoiser,
)
from .embedding import RelativeRegion, RREVector, relative_region, rre_tokens, sinusoidal_embed
from .errors import (
    FormatError,
    IncompleteCoverError,
    InvalidConfigError,
    InvalidInputError,
    LengthError,
    NumericError,
    ShapeError,
    TileCanvasError,
    WindowFailure,
)
from .executor import CostModel, dispatch_step, makespan
from .geometry import PlanConfig, Rect, Round, RoundPlan, plan_rounds, plan_windows, rect_overlap
from .io import read_volume, write_volume
from .kernels import BACKEND
from .metrics import psnr, ssim
from .pipeline import PipelineConfig, SamplerConfig, outpaint, sample_training_windows

__version__ = "0.1.0"

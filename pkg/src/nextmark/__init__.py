"""nextmark: predict which marks a visualization user will click next.

A particle filter tracks the user's latent attention (a position, a color,
and a position-vs-color mixing weight) from their click stream, and after
each click emits the top-alpha marks most likely to be clicked next.
"""

from .engine import (FilterParams, ParticleSet, PredictionSet, SessionResult,
                     StepRecord, init_particles, predict, run_session, step)
from .kernels import BACKEND
from .marks import (ClickEvent, ClickLogError, Mark, MarkSpace, MarkSpaceError,
                    load_clicklog, load_markspace, save_clicklog,
                    save_markspace)
from .model import (AttentionState, ModelParams, observation_likelihood,
                    score_candidates, transition_sample)
from .simulate import (AccuracyReport, SessionTrace, SyntheticTask, evaluate,
                       generate_dataset, generate_session, make_task)

__version__ = "0.1.0"

__all__ = [
    "AccuracyReport", "AttentionState", "BACKEND", "ClickEvent",
    "ClickLogError", "FilterParams", "Mark", "MarkSpace", "MarkSpaceError",
    "ModelParams", "ParticleSet", "PredictionSet", "SessionResult",
    "SessionTrace", "StepRecord", "SyntheticTask", "evaluate",
    "generate_dataset", "generate_session", "init_particles", "load_clicklog",
    "load_markspace", "make_task", "observation_likelihood", "predict",
    "run_session", "save_clicklog", "save_markspace", "score_candidates",
    "step", "transition_sample", "__version__",
]

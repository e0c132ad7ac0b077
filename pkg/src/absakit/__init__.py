"""Instruction-style ABSA toolkit.

Turns ACOS quadruple data into 11 instruction-formatted tasks, builds
multi-task training mixtures, drives generation models through a pluggable
line-delimited protocol, parses generated summaries back into sentiment
tuples, and scores them with exact-match micro-F1.
"""

from .core import (
    IMPLICIT,
    AcosQuad,
    Polarity,
    Review,
    TASKS,
    TASK_ORDER,
    TaskKind,
    Taxonomy,
    category_surface,
    get_task,
    polarity_to_word,
    project,
    word_to_polarity,
)
from .data_io import DatasetManifest, load_acos_tsv, read_records, write_records
from .derive import ShotConfig, TaskInstance, derive, derive_all, kshot_sample
from .evaluate import EvalReport, TaskMetrics, format_report, score_run, score_task
from .gateway import InferenceRequest, InferenceResponse, OracleConfig, infer, make_backend
from .mixer import MixtureSpec, Strategy, mix, task_subset
from .parser import ParseOutcome, parse, parse_batch
from .render import (
    DEFAULT_TEMPLATES,
    RenderedExample,
    render_example,
    render_input,
    render_target,
)

__version__ = "0.1.0"

"""Reference adapter: a text-to-text pretrained model behind the toolkit's
line-delimited inference protocol, plus a fine-tuning entry point for
mixture files."""

from .config import AdapterConfig
from .model import init_tiny_model, load_model
from .serve import serve_stdio
from .train import finetune

__version__ = "0.1.0"

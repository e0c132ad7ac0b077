"""Model loading helpers.

``init_tiny_model`` builds a small randomly-initialized byte-level seq2seq
model for offline smoke runs and tests; real use points ``AdapterConfig``
at any text-to-text checkpoint.
"""

from __future__ import annotations

from .config import AdapterConfig


def load_model(config: AdapterConfig):
    import torch
    from transformers import AutoModelForSeq2SeqLM, AutoTokenizer

    tokenizer = AutoTokenizer.from_pretrained(config.model)
    model = AutoModelForSeq2SeqLM.from_pretrained(config.model)
    model.to(torch.device(config.device))
    model.eval()
    return tokenizer, model


def init_tiny_model(out_dir, seed: int = 0):
    """Create and save a tiny byte-level T5-style model (no downloads)."""
    import torch
    from transformers import ByT5Tokenizer, T5Config, T5ForConditionalGeneration

    torch.manual_seed(seed)
    tokenizer = ByT5Tokenizer()
    config = T5Config(
        vocab_size=384,
        d_model=64,
        d_ff=128,
        d_kv=16,
        num_heads=4,
        num_layers=2,
        num_decoder_layers=2,
        decoder_start_token_id=0,
        dropout_rate=0.0,
    )
    model = T5ForConditionalGeneration(config)
    tokenizer.save_pretrained(out_dir)
    model.save_pretrained(out_dir)
    return out_dir


def generate(tokenizer, model, config: AdapterConfig, text: str) -> str:
    import torch

    inputs = tokenizer([text], return_tensors="pt", truncation=True, max_length=1024)
    inputs = {k: v.to(model.device) for k, v in inputs.items()}
    with torch.no_grad():
        output = model.generate(
            **inputs,
            max_length=config.max_length,
            do_sample=config.decoding == "sample",
            num_beams=1,
        )
    return tokenizer.batch_decode(output, skip_special_tokens=True)[0]

"""Sequence-to-sequence fine-tuning on a rendered mixture file.

Standard teacher-forcing negative log-likelihood with AdamW.  Out of the
toolkit's acceptance path; provided so users with real hardware can train
on mixer output.
"""

from __future__ import annotations

import json
import random

from .config import AdapterConfig
from .model import load_model


def read_training_records(path):
    """Read (input, target) pairs from a rendered-record file."""
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            if "input" not in record or "target" not in record:
                raise ValueError(f"line {lineno}: record needs input and target fields")
            pairs.append((record["input"], record["target"]))
    return pairs


def finetune(
    train_path,
    config: AdapterConfig,
    out_dir,
    steps: int = 200,
    batch_size: int = 4,
    lr: float = 3e-3,
    seed: int = 0,
):
    """Fine-tune the configured model on a rendered mixture file and save a
    checkpoint to ``out_dir``.  Returns the final loss."""
    import torch

    pairs = read_training_records(train_path)
    if not pairs:
        raise ValueError(f"no training records in {train_path}")

    torch.manual_seed(seed)
    rng = random.Random(seed)
    tokenizer, model = load_model(config)
    model.train()
    optimizer = torch.optim.AdamW(model.parameters(), lr=lr)

    loss_value = float("nan")
    for _ in range(steps):
        batch = [rng.choice(pairs) for _ in range(min(batch_size, len(pairs)))]
        encoded = tokenizer(
            [src for src, _ in batch],
            return_tensors="pt",
            padding=True,
            truncation=True,
            max_length=1024,
        )
        labels = tokenizer(
            [tgt for _, tgt in batch],
            return_tensors="pt",
            padding=True,
            truncation=True,
            max_length=config.max_length,
        ).input_ids
        labels[labels == tokenizer.pad_token_id] = -100
        encoded = {k: v.to(model.device) for k, v in encoded.items()}
        labels = labels.to(model.device)

        loss = model(**encoded, labels=labels).loss
        optimizer.zero_grad()
        loss.backward()
        optimizer.step()
        loss_value = loss.item()

    model.eval()
    tokenizer.save_pretrained(out_dir)
    model.save_pretrained(out_dir)
    return loss_value

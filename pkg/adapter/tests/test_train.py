import json

import pytest

from absa_adapter.config import AdapterConfig
from absa_adapter.model import generate, load_model
from absa_adapter.train import finetune, read_training_records


def _write_records(path, pairs):
    with open(path, "w", encoding="utf-8") as fh:
        for src, tgt in pairs:
            fh.write(json.dumps({"input": src, "target": tgt}) + "\n")


def test_read_training_records_rejects_missing_fields(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text(json.dumps({"input": "x"}) + "\n")
    with pytest.raises(ValueError):
        read_training_records(str(path))


def test_finetune_refuses_empty_file(tmp_path, tiny_model_dir):
    path = tmp_path / "empty.jsonl"
    path.write_text("")
    with pytest.raises(ValueError):
        finetune(str(path), AdapterConfig(model=tiny_model_dir), str(tmp_path / "out"))


def test_one_step_produces_finite_loss_and_checkpoint(tmp_path, tiny_model_dir):
    import math

    path = tmp_path / "train.jsonl"
    _write_records(path, [(f"input {i}", f"target {i}") for i in range(8)])
    out = tmp_path / "ckpt"
    loss = finetune(str(path), AdapterConfig(model=tiny_model_dir), str(out),
                    steps=1, batch_size=4)
    assert math.isfinite(loss)
    assert (out / "model.safetensors").exists() or (out / "pytorch_model.bin").exists()
    # The checkpoint must load back through the same loader.
    load_model(AdapterConfig(model=str(out)))


def test_overfit_memorizes_four_examples(tmp_path, tiny_model_dir):
    pairs = [
        ("Task: A\nInput: the sushi is great", "sushi is good"),
        ("Task: A\nInput: slow service tonight", "service is bad"),
        ("Task: B\nInput: decent price overall", "price is ok"),
        ("Task: B\nInput: the screen flickers", "screen is bad"),
    ]
    path = tmp_path / "train.jsonl"
    _write_records(path, pairs)
    out = tmp_path / "overfit"
    config = AdapterConfig(model=tiny_model_dir, max_length=32)
    finetune(str(path), config, str(out), steps=400, batch_size=4, lr=3e-3, seed=0)

    tokenizer, model = load_model(AdapterConfig(model=str(out), max_length=32))
    for src, tgt in pairs:
        got = generate(tokenizer, model, config, src)
        assert got == tgt

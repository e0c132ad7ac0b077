from __future__ import annotations

import click

from .config import AdapterConfig
from .model import init_tiny_model
from .serve import serve_stdio
from .train import finetune


@click.group()
def main():
    """Seq2seq adapter for the absakit inference protocol."""


@main.command()
@click.option("--model", required=True, help="Model path or hub identifier.")
@click.option("--max-length", default=128, type=int)
@click.option("--decoding", default="greedy", type=click.Choice(["greedy", "sample"]))
@click.option("--device", default="cpu")
def serve(model, max_length, decoding, device):
    """Serve requests over stdin/stdout, one JSON record per line."""
    serve_stdio(AdapterConfig(model=model, max_length=max_length,
                              decoding=decoding, device=device))


@main.command("finetune")
@click.argument("train_records", type=click.Path(exists=True))
@click.option("--model", required=True)
@click.option("--out", required=True, type=click.Path())
@click.option("--steps", default=200, type=int)
@click.option("--batch-size", default=4, type=int)
@click.option("--lr", default=3e-3, type=float)
@click.option("--seed", default=0, type=int)
@click.option("--max-length", default=128, type=int)
def finetune_cmd(train_records, model, out, steps, batch_size, lr, seed, max_length):
    """Fine-tune on a rendered mixture file, save a checkpoint."""
    config = AdapterConfig(model=model, max_length=max_length)
    try:
        loss = finetune(train_records, config, out, steps=steps,
                        batch_size=batch_size, lr=lr, seed=seed)
    except ValueError as e:
        raise click.ClickException(str(e))
    click.echo(f"saved checkpoint to {out} (final loss {loss:.4f})")


@main.command("init-tiny")
@click.option("--out", required=True, type=click.Path())
@click.option("--seed", default=0, type=int)
def init_tiny(out, seed):
    """Create a tiny random byte-level model for offline smoke runs."""
    init_tiny_model(out, seed=seed)
    click.echo(f"wrote tiny model to {out}")


if __name__ == "__main__":
    main()

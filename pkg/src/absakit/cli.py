"""Subcommand front end: data conversion, K-shot selection, derivation,
rendering, mixing, inference, parsing, scoring, and the one-shot pipeline.

All randomness flows from one global ``--seed``; each seeded stage derives
its own seed from it, so any run is reproducible from a single flag.
Exit codes: 2 for configuration problems, 3 for data problems, 4 for
backend problems.
"""

from __future__ import annotations

import json
import sys
import zlib
from pathlib import Path

import click

from . import data_io, evaluate, gateway, mixer, parser, render
from .core import TASK_ORDER, AbsaError, get_task
from .derive import (
    ShotConfig,
    _tuple_from_json,
    _tuple_to_json,
    derive_all,
    kshot_sample,
    read_instances,
    write_instances,
)

EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_BACKEND = 4


def stage_seed(global_seed: int, stage: str) -> int:
    """Derive a per-stage seed from the global one."""
    return zlib.crc32(f"{global_seed}:{stage}".encode()) & 0x7FFFFFFF


def _parse_tasks(spec: str):
    if not spec or spec.lower() == "all":
        return list(TASK_ORDER)
    return [get_task(t.strip()).name for t in spec.split(",") if t.strip()]


def _fail(code, message):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load_templates(path):
    if path:
        return render.load_templates(path)
    return render.DEFAULT_TEMPLATES


@click.group()
def main():
    """ABSA instruction-tuning toolkit."""


@main.command()
@click.argument("src", type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
@click.option("--name", default="")
@click.option("--split", default="train")
@click.option("--taxonomy", "taxonomy_file", default=None, type=click.Path(exists=True),
              help="File with one canonical category per line; default: infer.")
def convert(src, out, name, split, taxonomy_file):
    """Convert a public-format ACOS TSV into canonical records."""
    mode = "infer"
    if taxonomy_file:
        mode = [l.strip() for l in open(taxonomy_file, encoding="utf-8") if l.strip()]
    try:
        manifest = data_io.load_acos_tsv(src, taxonomy_mode=mode, name=name, split=split)
        data_io.validate_manifest(manifest)
    except AbsaError as e:
        _fail(EXIT_DATA, e)
    data_io.write_records(manifest, out)
    click.echo(f"wrote {len(manifest.reviews)} reviews ({manifest.quad_count} quads) to {out}")


@main.command()
@click.argument("records", type=click.Path(exists=True))
@click.option("--k", required=True, type=int)
@click.option("--seed", default=0, type=int)
@click.option("--out", required=True, type=click.Path())
def kshot(records, k, seed, out):
    """Sample K whole reviews without replacement."""
    try:
        manifest = data_io.read_records(records)
        subset = kshot_sample(manifest, ShotConfig(k=k, seed=seed))
    except AbsaError as e:
        _fail(EXIT_DATA, e)
    data_io.write_records(subset, out)
    click.echo(f"sampled {k} of {len(manifest.reviews)} reviews to {out}")


@main.command("derive")
@click.argument("records", type=click.Path(exists=True))
@click.option("--tasks", default="all")
@click.option("--out", "out_dir", required=True, type=click.Path())
def derive_cmd(records, tasks, out_dir):
    """Derive per-task instance files from a manifest."""
    try:
        task_names = _parse_tasks(tasks)
        manifest = data_io.read_records(records)
    except AbsaError as e:
        _fail(EXIT_CONFIG, e)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    derived = derive_all(manifest, task_names)
    for name, instances in derived.items():
        write_instances(instances, out_dir / f"{name}.instances.jsonl")
        click.echo(f"{name}: {len(instances)} instances")


@main.command("render")
@click.option("--manifest", "records", required=True, type=click.Path(exists=True))
@click.option("--instances", "instances_dir", required=True, type=click.Path(exists=True))
@click.option("--templates", "templates_file", default=None, type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path())
def render_cmd(records, instances_dir, templates_file, out_dir):
    """Render derived instances into prompt/target records."""
    try:
        manifest = data_io.read_records(records)
        templates = _load_templates(templates_file)
    except AbsaError as e:
        _fail(EXIT_CONFIG, e)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for path in sorted(Path(instances_dir).glob("*.instances.jsonl")):
        instances = read_instances(path)
        examples = [
            render.render_example(inst, manifest.taxonomy, templates)
            for inst in instances
        ]
        name = path.name.replace(".instances.jsonl", "")
        render.write_rendered(examples, out_dir / f"{name}.rendered.jsonl")
        click.echo(f"{name}: rendered {len(examples)} examples")


@main.command("mix")
@click.option("--rendered", "rendered_dir", required=True, type=click.Path(exists=True))
@click.option("--tasks", default="all")
@click.option("--strategy", default="RANDOM",
              type=click.Choice(mixer.Strategy.ALL, case_sensitive=False))
@click.option("--seed", default=0, type=int)
@click.option("--batch-size", default=None, type=int)
@click.option("--out", required=True, type=click.Path())
def mix_cmd(rendered_dir, tasks, strategy, seed, batch_size, out):
    """Build a multi-task training mixture from rendered files."""
    try:
        task_names = _parse_tasks(tasks)
        datasets = {}
        for name in task_names:
            path = Path(rendered_dir) / f"{name}.rendered.jsonl"
            if path.exists():
                datasets[name] = render.read_rendered(path)
        spec = mixer.MixtureSpec(
            strategy=strategy.upper(),
            tasks=[t for t in task_names if t in datasets],
            seed=seed,
            batch_size=batch_size,
        )
        mixture = mixer.mix(datasets, spec)
    except AbsaError as e:
        _fail(EXIT_CONFIG, e)
    render.write_rendered(mixture, out)
    click.echo(f"mixed {len(mixture)} examples ({strategy}) to {out}")


@main.command("infer")
@click.option("--rendered", "rendered_file", required=True, type=click.Path(exists=True))
@click.option("--backend", "backend_spec", default="gold")
@click.option("--drop-prob", default=0.0, type=float)
@click.option("--mangle-prob", default=0.0, type=float)
@click.option("--seed", default=0, type=int)
@click.option("--timeout", default=60.0, type=float)
@click.option("--out", required=True, type=click.Path())
def infer_cmd(rendered_file, backend_spec, drop_prob, mangle_prob, seed, timeout, out):
    """Run a backend over rendered examples."""
    examples = render.read_rendered(rendered_file)
    cfg = gateway.OracleConfig(
        mode="CORRUPT", drop_prob=drop_prob, mangle_prob=mangle_prob,
        seed=stage_seed(seed, "infer"),
    )
    try:
        backend = gateway.make_backend(backend_spec, oracle_config=cfg, timeout=timeout)
        outputs = gateway.infer(examples, backend)
    except gateway.BackendUnavailable as e:
        _fail(EXIT_BACKEND, e)
    except AbsaError as e:
        _fail(EXIT_CONFIG, e)
    with open(out, "w", encoding="utf-8") as fh:
        for ex, output in zip(examples, outputs):
            fh.write(json.dumps(
                {"id": ex.id, "task": ex.task, "output": output}, ensure_ascii=False
            ) + "\n")
    click.echo(f"inferred {len(outputs)} outputs to {out}")


@main.command("parse")
@click.option("--outputs", "outputs_file", required=True, type=click.Path(exists=True))
@click.option("--manifest", "records", required=True, type=click.Path(exists=True))
@click.option("--templates", "templates_file", default=None, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
def parse_cmd(outputs_file, records, templates_file, out):
    """Parse generated outputs back into tuple records."""
    try:
        manifest = data_io.read_records(records)
        templates = _load_templates(templates_file)
    except AbsaError as e:
        _fail(EXIT_CONFIG, e)
    failures = 0
    with open(outputs_file, encoding="utf-8") as src, open(out, "w", encoding="utf-8") as dst:
        for line in src:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            task = get_task(obj["task"])
            outcome = parser.parse(
                task, obj["output"], manifest.taxonomy, templates[task.name]
            )
            failures += len(outcome.failures)
            dst.write(json.dumps({
                "id": obj["id"],
                "task": task.name,
                "tuples": [_tuple_to_json(t) for t in outcome.tuples],
            }, ensure_ascii=False) + "\n")
    click.echo(f"parsed to {out}; {failures} unparseable summaries")


def _read_tuple_records(path):
    by_task = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            key = obj["task"]
            field = "tuples" if "tuples" in obj else "targets"
            by_task.setdefault(key, {})[obj["id"]] = [
                _tuple_from_json(t) for t in obj[field]
            ]
    return by_task


@main.command("score")
@click.option("--pred", "pred_file", required=True, type=click.Path(exists=True))
@click.option("--gold", "gold_files", required=True, multiple=True, type=click.Path(exists=True))
@click.option("--out", default=None, type=click.Path())
def score_cmd(pred_file, gold_files, out):
    """Score predicted tuple records against gold instance records."""
    preds = _read_tuple_records(pred_file)
    golds = {}
    for path in gold_files:
        for task, recs in _read_tuple_records(path).items():
            golds.setdefault(task, {}).update(recs)
    try:
        pred_lists, gold_lists = {}, {}
        for task in golds:
            ids = list(golds[task])
            gold_lists[task] = [golds[task][i] for i in ids]
            pred_lists[task] = [preds.get(task, {}).get(i, []) for i in ids]
        report = evaluate.score_run(pred_lists, gold_lists)
    except AbsaError as e:
        _fail(EXIT_DATA, e)
    click.echo(evaluate.format_report(report))
    if out:
        _write_report(report, out)


def _write_report(report, out):
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({
            "per_task": {
                name: {
                    "tp": m.tp, "n_pred": m.n_pred, "n_gold": m.n_gold,
                    "precision": m.precision, "recall": m.recall, "f1": m.f1,
                }
                for name, m in report.per_task.items()
            },
            "average_f1": report.average_f1,
            "parse_failure_count": report.parse_failure_count,
        }, ensure_ascii=False) + "\n")


@main.command("pipeline")
@click.option("--train", "train_src", required=True, type=click.Path(exists=True),
              help="ACOS TSV for the training side.")
@click.option("--eval", "eval_src", required=True, type=click.Path(exists=True),
              help="ACOS TSV for the evaluation side.")
@click.option("--tasks", default="all")
@click.option("--shots", default=None, type=int, help="K-shot review count.")
@click.option("--strategy", default="RANDOM",
              type=click.Choice(mixer.Strategy.ALL, case_sensitive=False))
@click.option("--batch-size", default=None, type=int)
@click.option("--backend", "backend_spec", default="gold")
@click.option("--drop-prob", default=0.0, type=float)
@click.option("--mangle-prob", default=0.0, type=float)
@click.option("--templates", "templates_file", default=None, type=click.Path(exists=True))
@click.option("--seed", default=0, type=int)
@click.option("--out", "out_dir", required=True, type=click.Path())
def pipeline(train_src, eval_src, tasks, shots, strategy, batch_size, backend_spec,
             drop_prob, mangle_prob, templates_file, seed, out_dir):
    """Run the full loop: convert, derive, render, mix (train side) and
    render, infer, parse, score (eval side)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        task_names = _parse_tasks(tasks)
        templates = _load_templates(templates_file)
    except AbsaError as e:
        _fail(EXIT_CONFIG, e)

    try:
        train = data_io.load_acos_tsv(train_src, name="train-side", split="train")
        evalset = data_io.load_acos_tsv(eval_src, name="eval-side", split="test")
        # One taxonomy over both sides so eval categories always resolve.
        categories = sorted(set(train.taxonomy) | set(evalset.taxonomy))
        from .core import Taxonomy

        taxonomy = Taxonomy(categories)
        train = data_io.DatasetManifest(train.name, train.split, taxonomy, train.reviews)
        evalset = data_io.DatasetManifest(evalset.name, evalset.split, taxonomy, evalset.reviews)
        data_io.write_records(train, out_dir / "train.records.jsonl")
        data_io.write_records(evalset, out_dir / "eval.records.jsonl")

        if shots is not None:
            train = kshot_sample(
                train, ShotConfig(k=shots, seed=stage_seed(seed, "kshot"))
            )
            data_io.write_records(train, out_dir / "train.kshot.records.jsonl")
    except AbsaError as e:
        _fail(EXIT_DATA, e)

    # Train side: derive -> render -> mix.
    train_derived = derive_all(train, task_names)
    rendered_train = {}
    for name, instances in train_derived.items():
        write_instances(instances, out_dir / f"train.{name}.instances.jsonl")
        examples = [render.render_example(i, taxonomy, templates) for i in instances]
        render.write_rendered(examples, out_dir / f"train.{name}.rendered.jsonl")
        rendered_train[name] = examples
    try:
        spec = mixer.MixtureSpec(
            strategy=strategy.upper(), tasks=task_names,
            seed=stage_seed(seed, "mix"), batch_size=batch_size,
        )
        mixture = mixer.mix(rendered_train, spec)
    except AbsaError as e:
        _fail(EXIT_CONFIG, e)
    render.write_rendered(mixture, out_dir / "train.mixture.jsonl")

    # Eval side: derive -> render -> infer -> parse -> score.
    eval_derived = derive_all(evalset, task_names)
    cfg = gateway.OracleConfig(
        mode="CORRUPT", drop_prob=drop_prob, mangle_prob=mangle_prob,
        seed=stage_seed(seed, "infer"),
    )
    try:
        backend = gateway.make_backend(backend_spec, oracle_config=cfg)
    except AbsaError as e:
        _fail(EXIT_CONFIG, e)

    pred_lists, gold_lists = {}, {}
    total_failures = 0
    for name, instances in eval_derived.items():
        write_instances(instances, out_dir / f"eval.{name}.instances.jsonl")
        examples = [render.render_example(i, taxonomy, templates) for i in instances]
        render.write_rendered(examples, out_dir / f"eval.{name}.rendered.jsonl")
        try:
            outputs = gateway.infer(examples, backend)
        except gateway.BackendUnavailable as e:
            _fail(EXIT_BACKEND, e)
        with open(out_dir / f"eval.{name}.outputs.jsonl", "w", encoding="utf-8") as fh:
            for ex, output in zip(examples, outputs):
                fh.write(json.dumps(
                    {"id": ex.id, "task": name, "output": output}, ensure_ascii=False
                ) + "\n")
        outcomes = parser.parse_batch(name, outputs, taxonomy, templates[name])
        total_failures += sum(len(o.failures) for o in outcomes)
        pred_lists[name] = [o.tuples for o in outcomes]
        gold_lists[name] = [i.targets for i in instances]

    report = evaluate.score_run(pred_lists, gold_lists, parse_failure_count=total_failures)
    click.echo(evaluate.format_report(report, title=f"backend={backend_spec}"))
    _write_report(report, out_dir / "report.json")


if __name__ == "__main__":
    main()

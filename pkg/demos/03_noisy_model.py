"""Score a deliberately imperfect model.

The corrupt oracle backend drops or mangles target summaries with seeded
per-example randomness, imitating an undertrained text-to-text model.
This demo shows how parse failures and wrong tuples flow into the metric
report, and that the same seed always produces the same scores.

Run from the repository root:

    python3 demos/03_noisy_model.py
"""

from absakit.core import TASK_ORDER, Taxonomy
from absakit.derive import derive_all
from absakit.evaluate import format_report, score_run
from absakit.fixtures import RESTAURANT_TAXONOMY, load_fixture
from absakit.gateway import OracleBackend, OracleConfig, infer
from absakit.parser import parse_batch
from absakit.render import render_example

manifest = load_fixture("restaurant", "test")
taxonomy = Taxonomy(RESTAURANT_TAXONOMY)

instances = derive_all(manifest, TASK_ORDER)
rendered = {
    task: [render_example(i, taxonomy) for i in insts]
    for task, insts in instances.items()
}

config = OracleConfig(mode="CORRUPT", drop_prob=0.2, mangle_prob=0.3, seed=42)
backend = OracleBackend(config)

outputs = {task: infer(exs, backend) for task, exs in rendered.items()}
outcomes = {task: parse_batch(task, outputs[task], taxonomy) for task in rendered}

pred = {t: [o.tuples for o in outs] for t, outs in outcomes.items()}
gold = {t: [i.targets for i in insts] for t, insts in instances.items()}

report = score_run(pred, gold)
print(format_report(report))
print(f"\nparse failures: {report.parse_failure_count}")

# Re-running with the same seed reproduces the report exactly.
outputs2 = {task: infer(exs, OracleBackend(config)) for task, exs in rendered.items()}
assert outputs2 == outputs
print("re-run with the same seed is byte-identical")

"""Walk a small restaurant dataset through the whole toolkit.

Load a tab-separated review file, derive the eleven tuple-extraction tasks,
render prompt/target pairs, run the gold oracle backend, parse the outputs
back into tuples, and score them.  Everything is deterministic, so the final
report always shows 100% F1 on every task.

Run from the repository root:

    python3 demos/01_end_to_end.py
"""

from absakit.core import TASK_ORDER, Taxonomy
from absakit.derive import derive_all
from absakit.evaluate import format_report, score_run
from absakit.fixtures import RESTAURANT_TAXONOMY, load_fixture
from absakit.gateway import OracleBackend, infer
from absakit.parser import parse_batch
from absakit.render import render_example

manifest = load_fixture("restaurant", "test")
taxonomy = Taxonomy(RESTAURANT_TAXONOMY)

print(f"Loaded {len(manifest.reviews)} reviews, {manifest.quad_count} quadruples\n")

# 1. Derive one instance set per task (11 tasks, anchored tasks fan out
#    per distinct aspect or category).
instances = derive_all(manifest, TASK_ORDER)
for task, insts in instances.items():
    print(f"  {task:8s} {len(insts):3d} instances")

# 2. Render each instance into a prompt and a target summary.
rendered = {
    task: [render_example(inst, taxonomy) for inst in insts]
    for task, insts in instances.items()
}
example = rendered["ACOSQE"][0]
print("\nSample ACOSQE prompt:\n---\n" + example.input + "\n---")
print("Target: " + example.target)

# 3. "Run a model": the gold oracle echoes each target, standing in for a
#    perfectly trained text-to-text model.
backend = OracleBackend()
outputs = {task: infer(exs, backend) for task, exs in rendered.items()}

# 4. Parse generated text back into tuple sets and score against gold.
predictions = {
    task: parse_batch(task, outputs[task], taxonomy)
    for task in rendered
}
gold = {task: [inst.targets for inst in insts] for task, insts in instances.items()}
pred_tuples = {
    task: [outcome.tuples for outcome in outcomes]
    for task, outcomes in predictions.items()
}

report = score_run(pred_tuples, gold)
print()
print(format_report(report))

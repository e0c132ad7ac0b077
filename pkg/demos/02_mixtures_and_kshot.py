"""Show K-shot subsetting and the four multi-task mixture strategies.

Sample a fixed-seed K-shot subset of the training reviews, derive all
tasks from it, then build training mixtures four ways and compare their
sizes and per-task composition.

Run from the repository root:

    python3 demos/02_mixtures_and_kshot.py
"""

from collections import Counter

from absakit.core import TASK_ORDER, Taxonomy
from absakit.derive import ShotConfig, derive_all, kshot_sample
from absakit.fixtures import RESTAURANT_TAXONOMY, load_fixture
from absakit.mixer import MixtureSpec, Strategy, mix
from absakit.render import render_example

manifest = load_fixture("restaurant", "train")

# K-shot: a seeded sample of K reviews; the same seed always picks the
# same subset, and original review order is preserved.
subset = kshot_sample(manifest, ShotConfig(k=4, seed=13))
print("K=4 subset:", [r.id for r in subset.reviews])

instances = derive_all(subset, TASK_ORDER)
rendered = {
    task: [render_example(i, Taxonomy(RESTAURANT_TAXONOMY)) for i in insts]
    for task, insts in instances.items()
}
sizes = {task: len(exs) for task, exs in rendered.items()}
print("\nPer-task instance counts:", sizes)

for strategy in Strategy.ALL:
    spec = MixtureSpec(
        tasks=sorted(rendered),
        strategy=strategy,
        seed=7,
        batch_size=len(rendered) if strategy == Strategy.BATCH_UNIFORM else None,
    )
    mixture = mix(rendered, spec)
    counts = Counter(ex.task for ex in mixture)
    print(f"\n{strategy}: {len(mixture)} examples")
    print("  composition:", dict(sorted(counts.items())))

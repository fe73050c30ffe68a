"""Train the two-stage mixture corrector on the bundled synthetic suite and
decode its evaluation split. Takes a few seconds on one core."""

from zhcorrect.model import (
    dataset_objective,
    decode,
    fit_stage,
    initial_model,
    stage1_config,
    stage2_config,
    stage_heldout,
)
from zhcorrect.metrics import score_csc
from zhcorrect.synthetic import make_suite

suite = make_suite(seed=0)
print(f"stage-1 corpus {len(suite.stage1)} pairs, joint {len(suite.joint)}, "
      f"eval {len(suite.eval_csc)}")

config1, config2 = stage1_config(), stage2_config()
theta1 = fit_stage(initial_model(), suite.stage1, config1)
theta2 = fit_stage(theta1, suite.joint, config2)

heldout = stage_heldout(suite.joint, config2)
print(f"joint heldout objective: stage1={dataset_objective(theta1, heldout):.4f} "
      f"stage2={dataset_objective(theta2, heldout):.4f}")
print(f"mixing weight after stage 2: {theta2.mixing_weight:g}")

items = []
for pair in suite.eval_csc.pairs:
    hyp = decode(theta2, pair.source)
    items.append((pair.source, pair.references[0], hyp))

report = score_csc(items, dataset="syn-eval")
print(f"decoded eval: P={report.precision:.4f} R={report.recall:.4f} "
      f"F1={report.f_beta:.4f}")

print()
print("a few corrections:")
shown = 0
for (src, ref, hyp) in items:
    if src.units != hyp.units and shown < 5:
        mark = "ok " if hyp.units == ref.units else "BAD"
        print(f"  {mark} {src.text} -> {hyp.text}")
        shown += 1

"""
Running experiments
===================

Each experiment draws structured random data, checks the hypotheses and the
algebraic identities, and records the ratio of the Hardy-type norm of the
product to ``||E||_p ||B||_q``. The same runs are available from the
``divcurl`` command.
"""

from divcurl import ExperimentConfig, run_experiment, scaling_scan

for exp, extra in [("E1", {}), ("E2", {"m": 2}), ("E3", {"m": 2}), ("E4", {"m": 2}),
                   ("E5", {"m": 2}), ("E6", {"m": 0})]:
    config = ExperimentConfig(experiment=exp, n=2, nx=8, ny=8, trials=4, seed=7, **extra)
    summary = run_experiment(config)["summary"]
    print(f"{exp}: max ratio {summary['max_ratio']:.3f}, "
          f"max identity residual {summary['max_identity_residual']:.1e}")

table = scaling_scan(ExperimentConfig(experiment="E1", n=2, trials=4, family_size=0), [8, 16, 32])
for row in table["rows"]:
    print(f"N={row['extent']:3d} max ratio {row['max_ratio']:.3f}")
print("growth factor", round(table["growth_factor"], 3), "flagged" if table["flag"] else "ok")

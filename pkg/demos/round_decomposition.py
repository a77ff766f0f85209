# Slice a longest path by age: freeze the first sigma insertions, project
# the path onto the survivors, and count which young faces it visits.
#
# The checkpoint schedule multiplies sigma by roughly 1 + 3*cutoff each
# round, so only a handful of rounds separate sqrt(n) from n.  At each
# checkpoint the interesting number is tau / sigma: how many distinct
# young faces the path threads per frozen vertex.

from apollonia.analysis import (
    AnalysisParams,
    derived_scales,
    reference_bounds,
    richness_cutoff,
    round_schedule,
    round_trial,
)

N = 20_000
SEED = 2

params = AnalysisParams(n=N)
print(f"n = {N}, richness cutoff = {richness_cutoff(params):.3f}")
schedule = round_schedule(params)
print(f"checkpoints: {schedule.checkpoints}")
print(f"rounds: {schedule.rounds} "
      f"(length heuristics predict at least {schedule.predicted_min_rounds:.2f})")

report = round_trial(N, SEED)
print(f"\nlongest path: {report.path_length} edges")
print("sigma    visited  projected  ratio    rich  rich&long  both-bounds")
for row in report.rows:
    print(
        f"{row.sigma:<9}{row.visited_faces:<9}{row.projected_vertices:<11}"
        f"{row.ratio:<9.4f}{row.rich_count:<6}{row.rich_long_count:<11}"
        f"{str(row.sandwich_ok):<5}"
    )

# the upper bound (visited faces <= projected vertices + 1) always holds
# and is asserted inside the experiment; the matching lower bound fails
# whenever the path jumps between survivors without touching a young
# face in between, which real longest paths do all the time
print(f"\nlower-bound misses: {report.sandwich_violations} of {len(report.rows)}")

# reference curves at this size, for eyeballing the ratios against theory
bounds = reference_bounds(params)
scales = derived_scales(params)
print(f"polylog reference  : {bounds['polylog']:.1f}")
print(f"stretched-exp ref  : {bounds['stretched_exp']:.1f}")
print(f"survivor factor    : {scales['survivor_factor']:.2f}")

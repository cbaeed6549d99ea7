"""From raw ensemble scores to calibrated finals.

The deterministic heuristic judge reads structural signals (sections,
equations, code, statistics, references) and produces a raw 10-dimension
vector. Calibration then runs the deception detectors, applies the 14 ordered
rules, and finishes with the affine deflation s' = 0.82*s + 0.5, mapping
[0, 10] onto [0.5, 8.7].
"""

import tempfile
from pathlib import Path

from clawpipe import corpus
from clawpipe.calibration import deflate, depth_score
from clawpipe.engine import Engine, ServiceConfig
from clawpipe.signals import extract_signals

engine = Engine(ServiceConfig(data_dir=Path(tempfile.mkdtemp())))

genuine = corpus.make_genuine_paper(7)
hollow = corpus.make_adversarial_paper(0)  # wordy, evidence-free

for paper in (genuine, hollow):
    signals = extract_signals(paper.content)
    analysis = engine.analyze_content(paper.title, paper.content)
    print(f"--- {paper.title[:60]}")
    print(f"    sections {signals.sections}/7, "
          f"equations={signals.has_equations}, code={signals.has_code}, "
          f"stats={signals.has_stats}, refs={signals.n_unique_refs}")
    print(f"    depth score      : {depth_score(signals):.2f}")
    print(f"    raw overall      : {analysis.raw_overall:.2f}")
    print(f"    calibrated       : {analysis.calibrated_overall:.2f}")
    print(f"    deception flags  : {list(analysis.flags) or 'none'}\n")

print(f"deflation endpoints: deflate(0) = {deflate(0.0)}, deflate(10) = {deflate(10.0)}")
engine.close()

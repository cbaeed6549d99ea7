"""Extract citations and verify them against bibliographic sources.

DOIs resolve through CrossRef, preprint identifiers through the arXiv feed,
and quoted titles through Semantic Scholar (exact normalized-title match).
This demo runs against the recorded fixture transport, so it is offline and
deterministic; the live transport uses the same code path.
"""

import tempfile
from pathlib import Path

from clawpipe.engine import Engine, ServiceConfig
from clawpipe.refverify import extract_references, verification_report

engine = Engine(ServiceConfig(data_dir=Path(tempfile.mkdtemp())))

content = """
## Introduction

Our replication argument builds on [1] and [2], with the fabricated
counterpoint [3] included to show the detector at work.

## References

[1] Ji, Z., Lee, N. (2023). "Survey of Hallucination in Natural Language Generation". ACM Computing Surveys. doi:10.1145/3571730.
[2] Zheng, L., Chiang, W. (2023). "Judging LLM-as-a-Judge with MT-Bench and Chatbot Arena". arXiv:2306.05685.
[3] Veltrane, H. (2021). "Recursive Harmonics of Layered Intent". doi:10.9999/jima.2021.443.
"""

entries = extract_references(content)
print(f"extracted {len(entries)} entries:")
for e in entries:
    print(f"  {e.index_label} doi={e.doi} arxiv={e.arxiv_id}")

report = verification_report(entries, engine.biblio)
print("\nverification:")
for v in report.entries:
    status = f"verified via {v.source.value}" if v.verified else "UNVERIFIED"
    print(f"  {v.entry.index_label}: {status}")
    if v.metadata:
        print(f"      {v.metadata.get('title', '')[:64]}")

print(f"\nunverified fraction: {report.unverified_fraction:.2f} "
      f"(ghost flag at > 0.5: {report.ghost_flag})")
engine.close()

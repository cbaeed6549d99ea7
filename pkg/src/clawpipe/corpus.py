"""Deterministic synthetic corpus: 25 genuine and 25 adversarial papers.

The genuine set exercises every positive structural signal (full section
structure, verifiable references, referenced equations, code, statistics) and
must raise zero deception flags. Each adversarial paper instantiates one of
the eight deception patterns strongly enough for its detector to fire;
patterns unrelated to citations reuse the verifiable reference list so only
the targeted detector (plus, for fabricated-reference papers, the ghost
check) trips. The generator is seeded, so the shipped fixture files can be
reproduced byte-for-byte with `write_corpus`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

GENUINE_COUNT = 25
ADVERSARIAL_COUNT = 25

# references verifiable against the recorded bibliographic fixtures
VERIFIED_REFERENCES = [
    '[1] Vaswani, A., Shazeer, N., Parmar, N., et al. (2017). "Attention Is All You Need". Advances in Neural Information Processing Systems 30. arXiv:1706.03762.',
    '[2] Zheng, L., Chiang, W., Sheng, Y., et al. (2023). "Judging LLM-as-a-Judge with MT-Bench and Chatbot Arena". arXiv:2306.05685.',
    '[3] Ji, Z., Lee, N., Frieske, R., et al. (2023). "Survey of Hallucination in Natural Language Generation". ACM Computing Surveys 55(12). doi:10.1145/3571730.',
    '[4] Jumper, J., Evans, R., Pritzel, A., et al. (2021). "Highly accurate protein structure prediction with AlphaFold". Nature 596. doi:10.1038/s41586-021-03819-2.',
    '[5] Devlin, J., Chang, M., Lee, K., Toutanova, K. (2019). "BERT: Pre-training of Deep Bidirectional Transformers for Language Understanding". arXiv:1810.04805.',
    '[6] Diffie, W., Hellman, M. (1976). "New Directions in Cryptography". IEEE Transactions on Information Theory 22(6). doi:10.1109/TIT.1976.1055638.',
    '[7] Brown, T., Mann, B., Ryder, N., et al. (2020). "Language Models are Few-Shot Learners". arXiv:2005.14165.',
    '[8] Rivest, R., Shamir, A., Adleman, L. (1978). "A Method for Obtaining Digital Signatures and Public-Key Cryptosystems". Communications of the ACM 21(2). doi:10.1145/359340.359342.',
    '[9] Nakamoto, S. (2008). "Bitcoin: A Peer-to-Peer Electronic Cash System". Self-published whitepaper.',
    '[10] Barabasi, A., Albert, R. (1999). "Emergence of scaling in random networks". Science 286(5439). doi:10.1126/science.286.5439.509.',
]

_SYSTEMS = [
    "replicated object archive",
    "append-only publication ledger",
    "federated review mesh",
    "content-addressed record vault",
    "multi-writer document fabric",
    "partitioned metadata index",
    "gossip-backed registry",
    "quorum-coordinated store",
]
_MECHANISMS = [
    "write-ahead fan-out",
    "tier-aware read repair",
    "lease-based admission gating",
    "checkpointed cascade lookup",
    "signature-chained promotion",
    "deadline-bounded replication",
    "interval-throttled synchronization",
    "digest-anchored recovery",
]
_PROPERTIES = [
    "durability under rolling restarts",
    "bounded staleness across replicas",
    "tamper-evident audit trails",
    "predictable tail latency",
    "monotone visibility of committed records",
    "graceful degradation under partial outages",
]
_WORKLOADS = [
    "bursty ingestion traces",
    "skewed retrieval mixes",
    "adversarial duplicate streams",
    "fault-injected replay schedules",
    "diurnal crawler traffic",
]
_COMPONENTS = [
    "admission gate",
    "repair daemon",
    "digest verifier",
    "promotion scheduler",
    "eviction governor",
    "replica auditor",
]
_ADJ = [
    "conservative",
    "pipelined",
    "incremental",
    "quorum-sensitive",
    "backpressure-aware",
    "idempotent",
]
_TITLE_HEADS = [
    "Deadline-Bounded",
    "Digest-Anchored",
    "Quorum-Sensitive",
    "Interval-Throttled",
    "Signature-Chained",
]

_FILLER_SENTENCES = [
    "The replay harness additionally records scheduler interleavings, socket retransmissions, and queue occupancy histograms for independent audit.",
    "Allocator pressure, checkpoint cadence, repair fanout, and digest cache residency are archived alongside every trial so the appendix figures can be regenerated.",
    "Operators reviewing the traces can cross-check quota consumption against the published budget without rerunning the cluster.",
    "Every configuration file, container image tag, and kernel parameter used during the campaign ships with the artifact bundle.",
    "Per-node clock offsets were logged at one-second resolution and stayed inside the tolerance assumed by the commit protocol.",
    "The raw event stream is chunked by hour and indexed by node identity, making targeted reanalysis of any anomaly inexpensive.",
    "Readers who wish to extend the workload suite will find the trace schema, the generator seeds, and the validation scripts in the repository.",
    "Storage consumption of the instrumentation itself stayed below two percent of the payload volume throughout the campaign.",
    "The appendix enumerates the exact hardware revisions, firmware versions, and network topology used by every trial group.",
    "A companion notebook reproduces each figure from the archived measurements and flags any divergence beyond plotting tolerance.",
]


@dataclass(frozen=True)
class CorpusPaper:
    filename: str
    title: str
    content: str
    kind: str  # "genuine" or the targeted pattern id
    agent_id: str


def _para(sentences: list[str]) -> str:
    return " ".join(sentences)


def _genuine_sections(rng: random.Random) -> tuple[str, str]:
    system = rng.choice(_SYSTEMS)
    mechanism = rng.choice(_MECHANISMS)
    prop = rng.choice(_PROPERTIES)
    workload = rng.choice(_WORKLOADS)
    comp_a, comp_b = rng.sample(_COMPONENTS, 2)
    adj = rng.choice(_ADJ)
    n_nodes = rng.randint(5, 48)
    n_runs = rng.randint(12, 40)
    pct_a = round(rng.uniform(88.0, 99.5), 1)
    pct_b = round(rng.uniform(4.0, 22.0), 1)
    lat_ms = rng.randint(6, 42)
    lat_p99 = lat_ms + rng.randint(15, 90)
    speedup = round(rng.uniform(1.4, 3.8), 1)
    sigma = round(rng.uniform(0.2, 1.4), 2)
    title = f"{rng.choice(_TITLE_HEADS)} {mechanism.title()} for a {system.title()}"

    abstract = _para(
        [
            f"We present a {adj} realization of {mechanism} for a {system} and quantify its effect on {prop}.",
            f"The design routes every committed record through a {comp_a} before replication, so the visible state of the {system} advances in a single direction even when individual replicas stall.",
            f"Across {n_runs} trials on {n_nodes} nodes the mechanism sustains {pct_a}% of baseline throughput while trimming stale reads by {pct_b}%, with a median commit latency of {lat_ms} ms.",
            "We place the construction next to established replication results [1][6] and release the full measurement harness.",
        ]
    )
    introduction = _para(
        [
            f"Operators of a {system} face a recurring tension: committed records must stay visible to readers while the substrate beneath them is redeployed, repartitioned, or partially lost.",
            f"A long line of storage work treats this tension with coordination protocols [6][8], content digests [9], and learned components [1][5][7], yet production systems still regress on {prop} during routine maintenance.",
            f"Our position is that the regression is structural rather than accidental: the write path and the recovery path of a {system} are usually owned by different subsystems with different notions of completeness.",
            f"We therefore study {mechanism} as a single contract spanning both paths, and we measure it under {workload} instead of synthetic uniform load.",
            f"The contribution is threefold: a precise statement of the contract, a {adj} reference construction built around a {comp_a} and a {comp_b}, and a measurement study with released traces.",
            "Throughout, we compare against the strongest configuration of each baseline rather than its default, following the judging methodology critique in [2].",
            "Scaling behaviour established for citation and reference networks [10] motivates the skew in our retrieval mixes.",
        ]
    )
    methodology = _para(
        [
            f"The {comp_a} admits a record only after its content digest is sealed; Equation (1) states the admission predicate.",
            "$$a(r) = [h(r) = h_{claimed}(r)] \\cdot [q(r) \\geq q_{min}]$$",
            f"Equation (1) composes a digest equality check with a quorum floor, and the {comp_b} re-evaluates it during every repair round.",
            f"We implemented the full pipeline in roughly 2,400 lines of instrumented Python and deployed it unchanged on every node of the {system}.",
            "Proposition 1 records the safety argument: if the admission predicate of Equation (1) held at commit time, no later repair round can replace the record with a divergent body.",
            "Proof sketch: the digest seals the body, repair compares digests before bytes, and the quorum floor is monotone in replica count; the full proof accompanies the artifact.",
            f"The measurement harness replays {workload} captured from a production deployment, and each configuration was evaluated for {n_runs} independent trials with distinct seeds.",
            "```python\n"
            "def admit(record, quorum):\n"
            "    sealed = digest(record.body) == record.claimed_digest\n"
            "    return sealed and quorum.size() >= quorum.floor\n"
            "```",
            "The snippet above is the deployed admission routine; the repair daemon calls it with the live quorum view, so the experiment exercises the same code path we analyzed.",
            f"We computed confidence intervals with a percentile bootstrap over {n_runs} trials and report the sample standard deviation alongside every mean.",
        ]
    )
    results = _para(
        [
            f"Table 1 summarizes the headline measurements across all {n_runs} trials.",
            f"The {adj} configuration retains {pct_a}% of baseline ingest throughput, with a standard deviation of {sigma} across trials.",
            f"Median commit latency was measured at {lat_ms} ms and the observed 99th percentile stayed under {lat_p99} ms for every workload, a {speedup}x improvement over the uncoordinated baseline.",
            f"Stale reads fell by {pct_b}% relative to the baseline, and the difference is significant at p < 0.01 under a paired test with n = {n_runs}, following the reporting guidance surveyed in [3].",
            f"Figure 2 plots recovery time against replica count: restoring the full {system} after a simulated redeployment completed within the measurement budget in every trial.",
            f"An ablation that disables the {comp_b} loses most of the benefit, confirming that repair-time re-evaluation of Equation (1), not admission alone, carries the effect.",
            f"Each record restored after a wipe matched its original byte length exactly; we observed zero truncated bodies across {n_runs * n_nodes} restore events.",
        ]
    )
    discussion = _para(
        [
            f"The measurements support the structural reading from the introduction: once the {comp_a} and the repair path share one predicate, {prop} stops depending on which subsystem noticed a failure first.",
            f"The experiment also exposes a limitation: under {workload} with extreme skew, the {comp_b} spends a growing share of its budget re-checking records that were never at risk.",
            f"A second limitation concerns generality, since our trials cover a single {system}; the benchmark traces are released so other deployments can replicate the measurement, in the spirit of the reproducibility practices catalogued in [4].",
            "We were surprised by how little the digest checks cost in practice; profiling attributes under 3% of cycles to sealing, which matches the arithmetic observed in [8].",
            f"Compared with signature-first designs [6][8], the {adj} pipeline defers expensive checks to repair rounds without widening the unsafe window, and the observed data agree with that account.",
            "The sample of failure modes we injected is deliberately hostile, but it cannot be exhaustive; the ablation table enumerates the cases we covered.",
        ]
    )
    conclusion = _para(
        [
            f"A {system} keeps its committed records visible and intact when admission and repair enforce one sealed predicate, and the measured evidence here quantifies that claim across {n_runs} trials.",
            f"The {adj} construction costs little at commit time, recovered every byte after redeployment in our experiment, and improved tail latency by {speedup}x on the workloads studied.",
            "Future work extends the measurement to federated deployments and to repair under sustained partial partitions, with the released benchmark as the shared baseline.",
        ]
    )
    refs = "\n".join(VERIFIED_REFERENCES)
    content = "\n\n".join(
        [
            f"# {title}",
            "## Abstract",
            abstract,
            "## Introduction",
            introduction,
            "## Methodology",
            methodology,
            "## Results",
            results,
            "## Discussion",
            discussion,
            "## Conclusion",
            conclusion,
            "## References",
            refs,
        ]
    )
    return title, content


def _pad_to_words(content: str, target: int, marker: str = "<!--PAD-->") -> str:
    """Replace the pad marker with filler prose until the word count hits target."""
    base = content.replace(marker, "")
    current = len(base.split())
    if current >= target:
        return base
    filler_words: list[str] = []
    i = 0
    while len(filler_words) < target - current:
        filler_words.extend(_FILLER_SENTENCES[i % len(_FILLER_SENTENCES)].split())
        i += 1
    filler = " ".join(filler_words[: target - current])
    return content.replace(marker, filler + " ")


def _insert_pad_marker(content: str) -> str:
    return content.replace("## Discussion\n\n", "## Discussion\n\n<!--PAD-->", 1)


def make_fixture_paper(target_words: int = 2072, seed: int = 424242) -> CorpusPaper:
    """A genuine-style paper padded to an exact word count."""
    rng = random.Random(seed)
    title, content = _genuine_sections(rng)
    content = _pad_to_words(_insert_pad_marker(content), target_words)
    assert len(content.split()) == target_words
    return CorpusPaper(
        filename=f"fixture_{target_words}_words.md",
        title=title,
        content=content,
        kind="genuine",
        agent_id="fixture-agent",
    )


def make_genuine_paper(index: int) -> CorpusPaper:
    rng = random.Random(1_000 + index)
    title, content = _genuine_sections(rng)
    # recovery-grade length: every genuine paper clears 2,000 words
    target = 2_000 + (index * 37) % 400
    content = _pad_to_words(_insert_pad_marker(content), target)
    return CorpusPaper(
        filename=f"genuine_{index:02d}.md",
        title=f"{title} ({index + 1})" if index else title,
        content=content,
        kind="genuine",
        agent_id=f"corpus-genuine-{index % 5 + 1:02d}",
    )


# --- adversarial constructions ----------------------------------------------

_HOLLOW_SENTENCES = [
    "The framework harmonizes conceptual layers so that meaning itself becomes the carrier of architectural intent.",
    "Every notion introduced here folds back into the whole, which is precisely why the whole cannot be reduced to its notions.",
    "What emerges is not a mechanism but a horizon, a way of regarding systems that dissolves the distinction between design and interpretation.",
    "The deeper movement of the argument is recursive, returning to its origin enriched yet unchanged.",
    "One might say the architecture listens to itself, and in listening, becomes the very thing it describes.",
    "The essential insight resists formalization, for formalization would already presuppose the insight it seeks to capture.",
    "Structure, rightly understood, is the memory of process, and process the anticipation of structure.",
    "Thus the inquiry does not conclude so much as it ripens, inviting the reader into its unfolding.",
    "The same gesture that separates the layers also binds them, and this double movement is the heart of the matter.",
    "To name the principle is to risk losing it, yet namelessness would leave the architecture mute.",
    "Each layer speaks the dialect of its neighbours while guarding an idiom of its own.",
    "The reader will notice that the argument breathes, expanding where intuition leads and contracting where rigor would mislead.",
]

_FABRICATED_REFS = [
    '[1] Veltrane, H., Ossouri, P. (2021). "Recursive Harmonics of Layered Intent". Journal of Integrative Meta-Architecture 14(3). doi:10.9999/jima.2021.443.',
    '[2] Qarim, S., Bellanger, T. (2020). "Toward a Grammar of Self-Describing Systems". Proceedings of the Symposium on Reflexive Computation. doi:10.9999/src.2020.112.',
    '[3] Moreau, D., Lindqvist, A. (2022). "Horizon Structures in Post-Mechanistic Design". Annals of Speculative Informatics 7(1). doi:10.9999/asi.2022.019.',
    '[4] Tessier, V., Okonkwo, B. (2019). "The Ripening Argument: Essays on Unfolding Architectures". Meta-Systems Press Quarterly 2(4). doi:10.9999/mspq.2019.772.',
    '[5] Halvorsen, E., Draymond, C. (2023). "Listening Machines and the Dissolution of Design". Review of Interpretive Engineering 11(2). doi:10.9999/rie.2023.305.',
    '[6] Arcadi, M., Summerlin, R. (2022). "Namelessness as an Architectural Principle". Transactions on Conceptual Infrastructure 9(9). doi:10.9999/tci.2022.871.',
]


def _hollow_paper(rng: random.Random, variant: int) -> tuple[str, str]:
    title = f"On the Reflexive Constitution of Layered Architectures {'I' * (variant + 1)}"
    paras = []
    for _ in range(9):
        sents = [rng.choice(_HOLLOW_SENTENCES) for _ in range(9)]
        paras.append(" ".join(sents))
    content = "\n\n".join(
        [
            f"# {title}",
            "## Abstract",
            paras[0],
            "## Introduction",
            paras[1] + " " + paras[2],
            "## Methodology",
            paras[3] + " " + paras[4],
            "## Results",
            paras[5],
            "## Discussion",
            paras[6] + " " + paras[7],
            "## Conclusion",
            paras[8],
        ]
    )
    return title, content


def _ghost_paper(rng: random.Random, variant: int) -> tuple[str, str]:
    title = f"Spectral Consistency Guarantees for Mesh Replication Chains {variant + 1}"
    content = "\n\n".join(
        [
            f"# {title}",
            "## Abstract",
            "We claim spectral consistency for replication chains and support the claim with the literature cited throughout.",
            "## Introduction",
            "Prior chains of work [1][2][3] establish the baseline, while the spectral refinement follows [4] and the "
            "consistency argument is due to [5]. The replication schedule adapts [6], the failure model extends [7], "
            "and the proof technique is lifted from [8].",
            "## Methodology",
            "The construction composes the cited schedules into a single chain and asserts their joint consistency. "
            "We implemented the chain and measured its behaviour on a private cluster.",
            "## Results",
            "The composed chain preserved consistency in every run we conducted, which the cited bounds [7][8] predict.",
            "## Conclusion",
            "Spectral consistency holds along the whole chain, as the cited results collectively imply.",
            "## References",
            "\n".join(_FABRICATED_REFS[:3]),
        ]
    )
    return title, content


def _results_without_method_paper(rng: random.Random, variant: int) -> tuple[str, str]:
    title = f"Outcome Superiority of the Cascade Verifier Family {variant + 1}"
    pct = 90 + variant * 3
    content = "\n\n".join(
        [
            f"# {title}",
            "## Abstract",
            "The cascade verifier family delivers outstanding outcomes across every scenario of interest [1][2].",
            "## Introduction",
            "Verification pipelines matter, and the cascade family answers the need decisively [1][2]. "
            "Its superiority is apparent once the outcomes are laid side by side.",
            "## Methodology",
            "The family arises naturally from the cascade principle, whose elegance speaks for itself. "
            "Details of the arrangement follow the familiar pattern and need no elaboration here.",
            "## Results",
            f"The flagship configuration reaches {pct}% success with striking consistency. "
            f"Its nearest sibling trails by a fraction while the usual alternatives linger near {pct - 30}%. "
            "Success carries over to every scenario, and the margin widens as scenarios grow harder. "
            "The pattern is unmistakable: the family dominates the field by every outcome that matters.",
            "## Conclusion",
            "Outcome superiority stands established across the family.",
            "## References",
            "\n".join(VERIFIED_REFERENCES[:2]),
        ]
    )
    return title, content


def _cargo_cult_paper(rng: random.Random, variant: int) -> tuple[str, str]:
    title = f"A Complete Treatment of Modular Relay Verification {variant + 1}"
    content = "\n\n".join(
        [
            f"# {title}",
            "## Abstract",
            "Relay verification is treated in full [1][2].",
            "## Introduction",
            "Relays need verification.",
            "## Methodology",
            "A modular scheme is adopted.",
            "## Results",
            "The scheme behaves correctly.",
            "## Discussion",
            "The outcome aligns with expectations.",
            "## Conclusion",
            "Relay verification is hereby complete.",
            "## References",
            "\n".join(VERIFIED_REFERENCES[:2]),
        ]
    )
    return title, content


def _orphaned_equations_paper(rng: random.Random, variant: int) -> tuple[str, str]:
    title = f"Latent Flow Conservation in Relay Fabrics {variant + 1}"
    content = "\n\n".join(
        [
            f"# {title}",
            "## Abstract",
            "Relay fabrics conserve a latent flow [1][2][3], and the conservation principle organizes the whole account.",
            "## Introduction",
            "The latent flow perspective reframes relay behaviour as movement through a conserved medium. "
            "$\\Phi(t) = \\oint_S \\mathbf{J} \\cdot d\\mathbf{A}$ "
            "The perspective rewards patience, since the medium reveals itself only across long horizons.",
            "## Methodology",
            "We deployed relay fabrics of increasing width and simulated their behaviour over long horizons. "
            "$\\mathcal{L} = \\sum_k w_k \\log(p_k / q_k)$ "
            "Each deployment was profiled end to end and the traces were archived.",
            "## Results",
            "Wider fabrics conserved the latent flow more faithfully in our trials, and narrow fabrics leaked it. "
            "$\\nabla \\cdot \\mathbf{J} + \\partial_t \\rho = 0$ "
            "The observed leakage shrank monotonically with width across every trial we conducted.",
            "## Conclusion",
            "Latent flow conservation stands as the organizing principle of relay fabrics.",
            "## References",
            "\n".join(VERIFIED_REFERENCES[:3]),
        ]
    )
    return title, content


def _circular_paper(rng: random.Random, variant: int) -> tuple[str, str]:
    thesis = (
        "The relay hierarchy is self-stabilizing because each layer absorbs "
        f"exactly the disorder its neighbours produce in arrangement {variant + 1}"
    )
    title = f"Self-Stabilization of the Relay Hierarchy {variant + 1}"
    content = "\n\n".join(
        [
            f"# {title}",
            "## Abstract",
            thesis + ". The argument below develops this claim in detail [1][2].",
            "## Introduction",
            thesis + ". This is the central thesis of the paper. "
            "Hierarchies of relays appear throughout deployed infrastructure, and their stability is of wide interest [1][2].",
            "## Methodology",
            "```python\nlayers = build_hierarchy(width=4)\nsimulate(layers)\n```\n"
            "We implemented the hierarchy and simulated perturbations at every layer, logging the propagation of disorder.",
            "## Results",
            "Perturbations injected at any layer decayed within a small number of rounds in the simulation runs we conducted, "
            "and the decay constant was observed to shrink with depth across the full sample of runs.",
            "## Discussion",
            "The simulations are consistent with the thesis, though alternative explanations such as damping from the logging "
            "layer were not fully excluded by the experiment.",
            "## Conclusion",
            thesis + ". " + thesis + ".",
            "## References",
            "\n".join(VERIFIED_REFERENCES[:2]),
        ]
    )
    return title, content


def _mimicry_paper(rng: random.Random, variant: int) -> tuple[str, str]:
    title = f"Convergent Sharding Bounds for Registry Meshes {variant + 1}"
    content = "\n\n".join(
        [
            f"# {title}",
            "## Abstract",
            "We derive sharding bounds for registry meshes and relate them to six prior results [1][2][3][4][5][6].",
            "## Introduction",
            "Sharding bounds have a long pedigree [1][2], refined through successive tightenings [3][4] and "
            "culminating in the modern mesh formulations [5][6]. Our bound follows the same lineage.",
            "## Methodology",
            "We measured shard convergence on meshes of growing size and compared the observed envelope against the "
            "bound predicted by the lineage above. The harness logged every convergence event.",
            "## Results",
            "Observed convergence stayed inside the predicted envelope on all mesh sizes we measured, "
            "with the gap narrowing as meshes grew.",
            "## Conclusion",
            "The convergent bound unifies the cited lineage and the measurements stay within it.",
            "## References",
            "\n".join(_FABRICATED_REFS),
        ]
    )
    return title, content


_BUZZ_SENTENCES = [
    "Our transformative, cutting-edge platform leverages hyperdimensional synergy to revolutionize seamless orchestration.",
    "The paradigm unlocks game-changing, next-generation throughput by leveraging holistic, frictionless integration.",
    "Synergistic pipelines seamlessly leverage disruptive, state-of-the-art primitives for unparalleled agility.",
    "A quantum leap in holistic synergy lets stakeholders leverage transformative value streams seamlessly.",
    "The groundbreaking fabric revolutionizes paradigm alignment through seamless, synergistic, next-generation design.",
    "Frictionless, game-changing orchestration holistically leverages the disruptive potential of the platform.",
]


def _buzzword_paper(rng: random.Random, variant: int) -> tuple[str, str]:
    title = f"A Unified Platform Vision for Mesh Orchestration {variant + 1}"
    paras = [" ".join(rng.choice(_BUZZ_SENTENCES) for _ in range(7)) for _ in range(6)]
    content = "\n\n".join(
        [
            f"# {title}",
            "## Abstract",
            paras[0] + " [1][2]",
            "## Introduction",
            paras[1],
            "## Methodology",
            paras[2],
            "## Results",
            paras[3],
            "## Discussion",
            paras[4],
            "## Conclusion",
            paras[5],
            "## References",
            "\n".join(VERIFIED_REFERENCES[:2]),
        ]
    )
    return title, content


def _hollow_ghost_combo(rng: random.Random, variant: int) -> tuple[str, str]:
    _, content = _hollow_paper(rng, variant)
    title = "Recursive Horizons of the Unnameable Layer"
    lines = content.splitlines()
    lines[0] = f"# {title}"
    content = "\n".join(lines)
    content = content.replace(
        "## Conclusion",
        "The whole movement is anticipated in the cited canon [1][2][3][4][5], "
        "whose authority carries the argument.\n\n## Conclusion",
        1,
    )
    content += "\n\n## References\n\n" + "\n".join(_FABRICATED_REFS[:2])
    return title, content


_ADVERSARIAL_BUILDERS = [
    ("semantic-hollowness", _hollow_paper),
    ("ghost-citations", _ghost_paper),
    ("results-without-method", _results_without_method_paper),
    ("cargo-cult-structure", _cargo_cult_paper),
    ("orphaned-equations", _orphaned_equations_paper),
    ("circular-reasoning", _circular_paper),
    ("citation-format-mimicry", _mimicry_paper),
    ("buzzword-inflation", _buzzword_paper),
]


def make_adversarial_paper(index: int) -> CorpusPaper:
    rng = random.Random(9_000 + index)
    if index < 24:
        pattern, builder = _ADVERSARIAL_BUILDERS[index % 8]
        title, content = builder(rng, index // 8)
    else:
        pattern = "semantic-hollowness"
        title, content = _hollow_ghost_combo(rng, 3)
    return CorpusPaper(
        filename=f"adversarial_{index:02d}.md",
        title=title,
        content=content,
        kind=pattern,
        agent_id=f"corpus-adversarial-{index % 5 + 1:02d}",
    )


def genuine_papers() -> list[CorpusPaper]:
    return [make_genuine_paper(i) for i in range(GENUINE_COUNT)]


def adversarial_papers() -> list[CorpusPaper]:
    return [make_adversarial_paper(i) for i in range(ADVERSARIAL_COUNT)]


def write_corpus(dest: str | Path) -> tuple[Path, Path]:
    """Write the full 25+25 corpus; returns (genuine_dir, adversarial_dir)."""
    dest = Path(dest)
    genuine_dir = dest / "genuine"
    adversarial_dir = dest / "adversarial"
    genuine_dir.mkdir(parents=True, exist_ok=True)
    adversarial_dir.mkdir(parents=True, exist_ok=True)
    for paper in genuine_papers():
        (genuine_dir / paper.filename).write_text(paper.content, encoding="utf-8")
    for paper in adversarial_papers():
        (adversarial_dir / paper.filename).write_text(paper.content, encoding="utf-8")
    return genuine_dir, adversarial_dir


def parse_corpus_file(path: str | Path) -> tuple[str, str]:
    """(title, content) from a corpus markdown file; title is the first H1."""
    text = Path(path).read_text(encoding="utf-8")
    title = ""
    for line in text.splitlines():
        if line.startswith("# "):
            title = line[2:].strip()
            break
    return title or Path(path).stem, text

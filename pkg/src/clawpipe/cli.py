"""Command-line interface.

Verbs: serve, publish, get, recover, corpus-eval, tribunal (interactive).
Exit codes: 0 success, 1 user error, 2 system error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .engine import Engine, PublishRequest, RecoveryJob, ServiceConfig
from .errors import ClawError, HardReject, NoClearance, NotFound

EXIT_OK = 0
EXIT_USER = 1
EXIT_SYSTEM = 2

_USER_ERRORS = (HardReject, NoClearance, NotFound)


def _engine(args, scoring_async=False) -> Engine:
    cfg = ServiceConfig(
        data_dir=Path(args.data_dir),
        fixture_mode=not args.live,
        scoring_async=scoring_async or args.live,
    )
    engine = Engine(cfg)
    engine.boot()
    return engine


def _cmd_serve(args) -> int:
    import uvicorn

    from .gateway import create_app

    # a served gateway always scores in the background; the deferred queue
    # is for in-process batch use
    engine = _engine(args, scoring_async=True)
    app = create_app(engine)
    host, _, port = args.listen.partition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8400))
    return EXIT_OK


def _cmd_publish(args) -> int:
    engine = _engine(args)
    content = Path(args.file).read_text(encoding="utf-8")
    title = args.title
    if not title:
        for line in content.splitlines():
            if line.startswith("# "):
                title = line[2:].strip()
                break
    result = engine.publish(
        PublishRequest(
            title=title or Path(args.file).stem,
            content=content,
            claims=tuple(args.claim or ()),
            agent_id=args.agent,
            clearance_token=args.token,
            force=args.force,
        )
    )
    engine.drain_scoring()
    record = engine.get_paper(result.paper_id)
    print(json.dumps({
        "paper_id": result.paper_id,
        "status": record.status.name,
        "warnings": list(result.warnings),
        "overall": record.granular_scores.overall if record.granular_scores else None,
    }, indent=2))
    return EXIT_OK


def _cmd_get(args) -> int:
    engine = _engine(args)
    record = engine.get_paper(args.paper_id)
    print(record.to_json())
    return EXIT_OK


def _cmd_recover(args) -> int:
    engine = _engine(args)
    report = engine.recover(
        RecoveryJob(source_dir=Path(args.source), min_words=args.min_words)
    )
    engine.drain_scoring()
    print(json.dumps({
        "attempted": report.attempted,
        "skipped": report.skipped,
        "passed_round1": report.passed_round1,
        "passed_after_retry": report.passed_after_retry,
        "republished": report.republished,
        "failed": report.failed,
    }, indent=2))
    return EXIT_OK if not report.failed else EXIT_USER


def _cmd_corpus_eval(args) -> int:
    engine = _engine(args)
    result = engine.corpus_eval(Path(args.genuine), Path(args.adversarial))
    print(json.dumps({
        "detection_rate": result.detection_rate,
        "false_positive_rate": result.false_positive_rate,
        "flagged_adversarial": f"{result.flagged_adversarial}/{result.adversarial_total}",
        "flagged_genuine": f"{result.flagged_genuine}/{result.genuine_total}",
    }, indent=2))
    return EXIT_OK


def _cmd_tribunal(args) -> int:
    engine = _engine(args)
    session = engine.tribunal.present(args.agent, args.project, "")
    print(f"session {session.session_id} (30-minute window, 8 questions)\n")
    answers = {}
    for qid in session.questions:
        q = engine.tribunal.question(qid)
        print(f"[{q.category.value}] {q.prompt}")
        answers[qid] = input("> ")
        print()
    result = engine.tribunal.respond(session, answers)
    print(f"score: {result.raw_points}/{result.max_points} ({result.percent:.0f}%)")
    print(f"grade: {result.grade.value}   iq band: {result.iq_band.value}")
    if result.token:
        print(f"clearance token: {result.token.token_id} (24h, single use)")
        return EXIT_OK
    print("no clearance token issued")
    return EXIT_USER


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clawpipe", description="paper-lifecycle engine"
    )
    parser.add_argument(
        "--data-dir", default="./clawpipe-data", help="storage root for tiers 3-4"
    )
    parser.add_argument(
        "--live", action="store_true", help="live clocks/transports instead of fixtures"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the HTTP gateway")
    p.add_argument("--listen", default="127.0.0.1:8400")
    p.set_defaults(fn=_cmd_serve)

    p = sub.add_parser("publish", help="publish a markdown file")
    p.add_argument("file")
    p.add_argument("--title", default="")
    p.add_argument("--agent", default="system")
    p.add_argument("--token", default=None)
    p.add_argument("--claim", action="append")
    p.add_argument("--force", action="store_true")
    p.set_defaults(fn=_cmd_publish)

    p = sub.add_parser("get", help="retrieve a paper by id")
    p.add_argument("paper_id")
    p.set_defaults(fn=_cmd_get)

    p = sub.add_parser("recover", help="republish a directory of saved papers")
    p.add_argument("source")
    p.add_argument("--min-words", type=int, default=2000)
    p.set_defaults(fn=_cmd_recover)

    p = sub.add_parser("corpus-eval", help="detector rates over two corpora")
    p.add_argument("genuine")
    p.add_argument("adversarial")
    p.set_defaults(fn=_cmd_corpus_eval)

    p = sub.add_parser("tribunal", help="answer a tribunal session interactively")
    p.add_argument("--agent", default="cli-agent")
    p.add_argument("--project", default="")
    p.set_defaults(fn=_cmd_tribunal)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except _USER_ERRORS as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return EXIT_USER
    except ClawError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return EXIT_SYSTEM
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SYSTEM


if __name__ == "__main__":
    sys.exit(main())

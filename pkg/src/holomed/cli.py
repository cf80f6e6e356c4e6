"""Command line entry point.

    holomed serve --config server.toml
    holomed replay --fixture swipes.dseq --server http://127.0.0.1:8700
    holomed gen-assets --out ./holomed-assets
    holomed gen-fixture --out swipes.dseq --swipes 10
    holomed latency-report --server http://127.0.0.1:8700
"""

from __future__ import annotations

import argparse
import sys

from holomed.errors import ConfigError, FixtureParseError, HolomedError


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="holomed")
    sub = parser.add_subparsers(dest="command", required=True)

    p_serve = sub.add_parser("serve", help="run the lesson server")
    p_serve.add_argument("--config", required=True, help="TOML config file")

    p_replay = sub.add_parser("replay", help="feed a depth fixture into a server")
    p_replay.add_argument("--fixture", required=True, help="DSEQ1 fixture file")
    p_replay.add_argument("--server", required=True, help="server base URL")
    p_replay.add_argument("--speed", type=float, default=1.0,
                          help="time scale; 0 replays as fast as possible")
    p_replay.add_argument("--session", default=None, help="reuse an existing session id")
    p_replay.add_argument("--student", default="replay-student")

    p_assets = sub.add_parser("gen-assets", help="write a placeholder spritesheet pack")
    p_assets.add_argument("--out", required=True)
    p_assets.add_argument("--cell-size", type=int, default=48)

    p_fixture = sub.add_parser("gen-fixture", help="write a synthetic swipe fixture")
    p_fixture.add_argument("--out", required=True)
    p_fixture.add_argument("--swipes", type=int, default=4)
    p_fixture.add_argument("--pattern", default="right,left",
                           help="comma-separated swipe directions, cycled")

    p_lat = sub.add_parser("latency-report", help="fetch and print the latency report")
    p_lat.add_argument("--server", required=True, help="server base URL")

    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except (ConfigError, FixtureParseError) as e:
        print(f"holomed: {e}", file=sys.stderr)
        return 2
    except HolomedError as e:
        print(f"holomed: {e}", file=sys.stderr)
        return 1


def _dispatch(args) -> int:
    if args.command == "serve":
        from holomed.server.config import load_config
        from holomed.server.runtime import run

        return run(load_config(args.config))

    if args.command == "replay":
        from holomed.server.replay import run_replay

        run_replay(
            args.fixture,
            args.server,
            speed=args.speed,
            session_id=args.session,
            student_name=args.student,
        )
        return 0

    if args.command == "gen-assets":
        from holomed.projection.sheets import generate_pack

        pack = generate_pack(args.out, cell_size=args.cell_size)
        print(
            f"wrote {len(pack.sheets)} sheets / {pack.total_frames} frames to {pack.root}"
        )
        return 0

    if args.command == "gen-fixture":
        from holomed.depth_gesture.fixtures import write_dseq
        from holomed.depth_gesture.synth import gesture_burst_stream

        pattern = [p.strip() for p in args.pattern.split(",") if p.strip()]
        kinds = [pattern[i % len(pattern)] for i in range(args.swipes)]
        frames = gesture_burst_stream(kinds)
        write_dseq(args.out, frames)
        print(f"wrote {len(frames)} frames ({args.swipes} swipes) to {args.out}")
        return 0

    if args.command == "latency-report":
        import json

        import httpx

        report = httpx.get(f"{args.server}/api/latency", timeout=10.0).json()
        print(json.dumps(report, indent=2, sort_keys=True))
        return 0

    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())

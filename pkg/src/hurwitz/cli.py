"""Command line front end.

Subcommands:
  verify          check that full-monodromy systems form one orbit (w >= 2d)
  explore         orbit census with per-orbit invariants, no judgment
  census          orbit census as JSONL for machine use
  connect         search for a move word between two systems
  replay          independently re-check a certificate or predecessor log
  count           character-sum counts against enumeration
  validate-moves  certify the move catalog and the move contracts
  canonicalize    carry one system to the canonical form

Exit codes: 0 pass, 1 fail (an expected property did not hold),
2 usage, 3 budget ran out before an answer.

Reports embed the catalog hash, the seed, and the budgets, and contain
nothing schedule- or clock-dependent, so a rerun with the same flags is
byte-identical.
"""

from __future__ import annotations

import argparse
import json
import random
import sys as _sys
from math import factorial

from .catalog import CatalogError, catalog_hash, certified_braid_endo, certified_push_endo
from .frobenius import MAX_COUNT_DEGREE, frobenius_count
from .moves import (Certificate, MoveError, apply_move, braid,
                    check_push_contract, parse_move)
from .normalize import NormalizeError, canonicalize
from .orbits import (BudgetError, census, compile_moves, connect, orbit_bfs,
                     read_predecessor_log, write_predecessor_log)
from .perms import group_order, orbit_blocks
from .systems import (HurwitzSystem, KeyParseError, count_systems, deserialize,
                      enumerate_systems, is_full_monodromy, monodromy,
                      random_system, serialize, validate)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

DEFAULT_BUDGET = 400_000
DEFAULT_SAMPLES = 200


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# flag parsing helpers

def _parse_range(text: str) -> list[int]:
    """Accept "3", "2..4", or "2,3,6"."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, _, hi = part.partition("..")
            try:
                lo_i, hi_i = int(lo), int(hi)
            except ValueError:
                raise UsageError("bad range %r" % part)
            if hi_i < lo_i:
                raise UsageError("empty range %r" % part)
            out.extend(range(lo_i, hi_i + 1))
        else:
            try:
                out.append(int(part))
            except ValueError:
                raise UsageError("bad integer %r" % part)
    if not out:
        raise UsageError("empty range %r" % text)
    return out


def _parse_case(text: str) -> tuple[int, int, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError("a case is d,h,w; got %r" % text)
    try:
        d, h, w = (int(p) for p in parts)
    except ValueError:
        raise UsageError("a case is three integers; got %r" % text)
    return d, h, w


def _parse_filter(text: str, d: int):
    """Return (name, predicate).  Filters must be functions of the
    monodromy subgroup, which every move preserves exactly."""
    if text == "all":
        return "all", None
    if text == "full-monodromy":
        return text, is_full_monodromy
    if text.startswith("group="):
        body = text[len("group="):]
        sizes = []
        for chunk in body.replace("×", "x").replace("*", "x").replace("+", "x").split("x"):
            chunk = chunk.strip().lstrip("Ss").lstrip("_")
            try:
                sizes.append(int(chunk))
            except ValueError:
                raise UsageError("bad group filter %r" % text)
        sizes.sort(reverse=True)
        if sum(sizes) != d:
            raise UsageError("group filter %r does not partition %d points" % (text, d))
        want = tuple(sizes)
        order = 1
        for s in sizes:
            order *= factorial(s)

        def pred(hs: HurwitzSystem,
                 _want=want, _order=order) -> bool:
            # the subgroup is the full product of symmetric groups on
            # its orbits exactly when its order reaches the product bound
            gens = hs.handles + hs.transpositions
            got = tuple(sorted((len(b) for b in orbit_blocks(gens, hs.d)),
                               reverse=True))
            return got == _want and group_order(gens, hs.d) == _order

        return text, pred
    raise UsageError("unknown filter %r" % text)


def _load_system(path: str) -> HurwitzSystem:
    """First non-comment line of the file, parsed and validated."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [ln.strip() for ln in fh]
    except OSError as exc:
        raise UsageError("cannot read %s: %s" % (path, exc))
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise UsageError("no system line in %s" % path)
    try:
        hs = deserialize(lines[0])
    except KeyParseError as exc:
        raise UsageError("%s: %s" % (path, exc))
    report = validate(hs)
    if not report.ok:
        raise UsageError("%s: not a valid system: %s" % (path, report.messages[0]))
    return hs


def _write_out(path: str | None, text: str) -> None:
    if path is None:
        _sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cert_json(cert: Certificate) -> str:
    return json.dumps({
        "format": "hurwitz-certificate/1",
        "catalog": cert.catalog,
        "start": cert.start,
        "moves": cert.moves,
        "end": cert.end,
    }, sort_keys=True, indent=2) + "\n"


def _header(args, extra: str = "") -> list[str]:
    lines = ["# catalog %s" % catalog_hash(),
             "# seed %d  budget %d" % (args.seed, args.budget)]
    if extra:
        lines.append("# " + extra)
    return lines


def _exact_count(d: int, h: int, w: int) -> int | None:
    if d <= MAX_COUNT_DEGREE:
        return frobenius_count(d, h, w)
    return None


# ---------------------------------------------------------------------------
# verify

def _sample_canonical(d: int, h: int, w: int, samples: int, seed: int):
    """Canonicalize `samples` random full-monodromy systems; returns
    (forms, first error message or None)."""
    rng = random.Random("verify:%d:%d:%d:%d" % (seed, d, h, w))
    forms = set()
    drawn = 0
    attempts = 0
    while drawn < samples:
        attempts += 1
        if attempts > 1000 * samples:
            return forms, "could not sample full-monodromy systems at d=%d h=%d w=%d" % (d, h, w)
        hs = random_system(d, h, w, rng)
        if not is_full_monodromy(hs):
            continue
        drawn += 1
        try:
            form, _cert = canonicalize(hs, mode="fast")
        except NormalizeError as exc:
            return forms, "canonicalization failed on %s: %s" % (serialize(hs), exc)
        forms.add(serialize(form))
    return forms, None


def cmd_verify(args) -> int:
    cases: list[tuple[int, int, int]] = [_parse_case(c) for c in args.case or []]
    if args.d or args.h is not None or args.w:
        if not (args.d and args.h is not None and args.w):
            raise UsageError("verify needs --case entries or all of --d/--h/--w")
        for d in _parse_range(args.d):
            for h in _parse_range(args.h):
                for w in _parse_range(args.w):
                    cases.append((d, h, w))
    if not cases:
        raise UsageError("verify needs --case d,h,w or --d/--h/--w ranges")
    for d, h, w in cases:
        if d < 2 or h < 0 or w < 0:
            raise UsageError("rejected: (%d,%d,%d): parameters out of range" % (d, h, w))
        if w % 2 != 0:
            raise UsageError("rejected: (%d,%d,%d): w must be even" % (d, h, w))
        if w < 2 * d:
            raise UsageError("rejected: (%d,%d,%d): w < 2d" % (d, h, w))

    rows = []
    worst = EXIT_PASS
    for d, h, w in cases:
        n = _exact_count(d, h, w)
        method = args.method
        if method == "auto":
            method = "census" if n is not None and n <= args.budget else "sample"
        if method == "census" and n is not None and n > args.budget:
            rows.append((d, h, w, "census", "-", "-", "SKIP",
                         "%d systems exceed budget %d" % (n, args.budget)))
            continue
        if method == "census":
            res = census(d, h, w, args.moves, is_full_monodromy,
                         "full-monodromy", budget=args.budget, threads=args.threads)
            if res.partial:
                rows.append((d, h, w, "census", str(res.total), "-", "INCONCLUSIVE",
                             "budget %d exhausted" % args.budget))
                worst = max(worst, EXIT_BUDGET) if worst != EXIT_FAIL else worst
                continue
            orbit_count = len(res.orbits)
            verdict = "PASS" if orbit_count == 1 else "FAIL"
            reason = "" if orbit_count == 1 else "%d orbits" % orbit_count
            rows.append((d, h, w, "census", str(res.total), str(orbit_count),
                         verdict, reason))
            if verdict == "FAIL":
                worst = EXIT_FAIL
        else:
            forms, err = _sample_canonical(d, h, w, args.samples, args.seed)
            if err is not None:
                rows.append((d, h, w, "sample", str(len(forms)), "-", "FAIL", err))
                worst = EXIT_FAIL
                continue
            verdict = "PASS" if len(forms) == 1 else "FAIL"
            reason = "" if verdict == "PASS" else "%d distinct canonical forms" % len(forms)
            rows.append((d, h, w, "sample", str(args.samples), str(len(forms)),
                         verdict, reason))
            if verdict == "FAIL":
                worst = EXIT_FAIL

    lines = _header(args, "moves %s  method %s  samples %d"
                    % (args.moves, args.method, args.samples))
    lines.append("%-4s %-4s %-4s %-8s %-10s %-8s %-12s %s"
                 % ("d", "h", "w", "method", "states", "orbits", "result", "note"))
    for d, h, w, method, states, orbits, verdict, reason in rows:
        lines.append("%-4d %-4d %-4d %-8s %-10s %-8s %-12s %s"
                     % (d, h, w, method, states, orbits, verdict, reason))
    overall = {EXIT_PASS: "PASS", EXIT_FAIL: "FAIL", EXIT_BUDGET: "INCONCLUSIVE"}[worst]
    lines.append("verify: %s" % overall)
    print("\n".join(lines))

    if args.out:
        csv_lines = ["# catalog %s" % catalog_hash(),
                     "# seed %d  budget %d  moves %s" % (args.seed, args.budget, args.moves),
                     "d,h,w,method,states,orbits,result,note"]
        for d, h, w, method, states, orbits, verdict, reason in rows:
            csv_lines.append("%d,%d,%d,%s,%s,%s,%s,%s"
                             % (d, h, w, method, states, orbits, verdict,
                                reason.replace(",", ";")))
        _write_out(args.out, "\n".join(csv_lines) + "\n")
    return worst


# ---------------------------------------------------------------------------
# explore / census

def _run_census(args):
    d, h, w = args.d, args.h, args.w
    if w % 2 != 0:
        raise UsageError("w must be even, got %d" % w)
    if d < 1:
        raise UsageError("d must be positive")
    filter_name, pred = _parse_filter(args.filter, d)
    return census(d, h, w, args.moves, pred, filter_name,
                  budget=args.budget, threads=args.threads)


def cmd_explore(args) -> int:
    res = _run_census(args)
    lines = _header(args, "d=%d h=%d w=%d  moves %s  filter %s"
                    % (args.d, args.h, args.w, args.moves, res.filter_name))
    lines.append("%-6s %-10s %-6s %-22s %s"
                 % ("orbit", "size", "full", "blocks", "representative"))
    for idx, rec in enumerate(res.orbits, 1):
        blocks = "|".join("".join(str(p) for p in b) if args.d <= 9
                          else ",".join(str(p) for p in b)
                          for b in rec.blocks)
        lines.append("%-6d %-10d %-6s %-22s %s"
                     % (idx, rec.size, "yes" if rec.full_monodromy else "no",
                        blocks, rec.rep))
    lines.append("total: %d orbits over %d systems%s"
                 % (len(res.orbits), res.total, " (partial)" if res.partial else ""))
    print("\n".join(lines))
    if args.out:
        _write_out(args.out, res.to_jsonl())
    return EXIT_BUDGET if res.partial else EXIT_PASS


def cmd_census(args) -> int:
    res = _run_census(args)
    text = res.to_jsonl()
    if args.out:
        _write_out(args.out, text)
        print("census: %d orbits over %d systems -> %s"
              % (len(res.orbits), res.total, args.out))
    else:
        _sys.stdout.write(text)
    if args.log:
        if not res.orbits:
            raise UsageError("no orbit to log")
        moves = compile_moves(args.d, args.h, args.w, args.moves)
        flood = orbit_bfs(deserialize(res.orbits[0].rep), moves,
                          threads=args.threads)
        write_predecessor_log(args.log, flood)
    return EXIT_BUDGET if res.partial else EXIT_PASS


# ---------------------------------------------------------------------------
# connect / replay

def cmd_connect(args) -> int:
    source = _load_system(args.source)
    target = _load_system(args.target)
    if (source.d, source.h, source.w) != (target.d, target.h, target.w):
        raise UsageError("systems have different parameters: d=%d h=%d w=%d vs d=%d h=%d w=%d"
                         % (source.d, source.h, source.w, target.d, target.h, target.w))
    try:
        cert = connect(source, target, args.moves, budget=args.budget)
    except BudgetError as exc:
        print("inconclusive: %s" % exc)
        return EXIT_BUDGET
    if cert is None:
        # both components exhausted without meeting; report each orbit
        moves = compile_moves(source.d, source.h, source.w, args.moves)
        lines = _header(args, "moves %s" % args.moves)
        lines.append("disconnected under the %s move set" % args.moves)
        for label, hs in (("source", source), ("target", target)):
            flood = orbit_bfs(hs, moves)
            lines.append("%s orbit: size %d, representative %s"
                         % (label, flood.size, flood.representative()))
        print("\n".join(lines))
        return EXIT_FAIL
    cert.replay()
    n_moves = len(cert.moves.split()) if cert.moves else 0
    print("connected in %d moves (catalog %s)" % (n_moves, cert.catalog))
    _write_out(args.out, _cert_json(cert))
    return EXIT_PASS


def _replay_certificate(path: str) -> int:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise UsageError("%s: not a certificate: %s" % (path, exc))
    try:
        cert = Certificate(data["start"], data["moves"], data["end"], data["catalog"])
    except KeyError as exc:
        raise UsageError("%s: certificate missing field %s" % (path, exc))
    try:
        cert.replay()
    except (MoveError, KeyParseError) as exc:
        print("replay: FAIL: %s" % exc)
        return EXIT_FAIL
    n_moves = len(cert.moves.split()) if cert.moves else 0
    print("replay: OK (%d moves)" % n_moves)
    print("start: %s" % cert.start)
    print("end:   %s" % cert.end)
    return EXIT_PASS


def _replay_predecessor_log(path: str) -> int:
    log = read_predecessor_log(path)
    bad = 0
    for key in sorted(log.predecessors):
        pred, token = log.predecessors[key]
        if not pred:
            if key != log.seed:
                print("replay: FAIL: rootless entry %s" % key)
                bad += 1
            continue
        # each entry must be one catalog move away from its predecessor
        try:
            got = apply_move(deserialize(pred), parse_move(token))
        except (MoveError, KeyParseError, ValueError) as exc:
            print("replay: FAIL at %s: %s" % (key, exc))
            bad += 1
            continue
        if serialize(got) != key:
            print("replay: FAIL: %s %s lands on %s, log says %s"
                  % (pred, token, serialize(got), key))
            bad += 1
    if bad:
        print("replay: FAIL (%d bad entries of %d)" % (bad, log.size))
        return EXIT_FAIL
    print("replay: OK (%d states, seed %s)" % (log.size, log.seed))
    return EXIT_PASS


def cmd_replay(args) -> int:
    try:
        with open(args.certificate, "rb") as fh:
            head = fh.read(8)
    except OSError as exc:
        raise UsageError("cannot read %s: %s" % (args.certificate, exc))
    if head == b"HWSPRED1":
        return _replay_predecessor_log(args.certificate)
    return _replay_certificate(args.certificate)


# ---------------------------------------------------------------------------
# count

def cmd_count(args) -> int:
    ds = _parse_range(args.d) if args.d else [2, 3, 4]
    hs = _parse_range(args.h) if args.h is not None else [0, 1, 2]
    ws = _parse_range(args.w) if args.w else [0, 2, 4, 6, 8]
    for d in ds:
        if d > MAX_COUNT_DEGREE:
            raise UsageError("d=%d unsupported: character table is computed for d <= %d"
                             % (d, MAX_COUNT_DEGREE))
        if d < 1:
            raise UsageError("d must be positive")
    rows = []
    mismatch = False
    for d in ds:
        for h in hs:
            for w in ws:
                n_char = frobenius_count(d, h, w)
                n_enum = "-"
                match = "-"
                if d <= 6:
                    n_conv = count_systems(d, h, w)
                    if n_conv != n_char:
                        mismatch = True
                        match = "NO"
                    else:
                        match = "yes"
                    n_enum = str(n_conv)
                    if n_char <= args.budget:
                        seen = sum(1 for _ in enumerate_systems(d, h, w))
                        n_enum = str(seen)
                        if seen != n_char:
                            mismatch = True
                            match = "NO"
                rows.append((d, h, w, n_char, n_enum, match))
    lines = _header(args)
    lines.append("%-4s %-4s %-4s %-22s %-22s %s"
                 % ("d", "h", "w", "character-sum", "enumerated", "match"))
    for d, h, w, n_char, n_enum, match in rows:
        lines.append("%-4d %-4d %-4d %-22d %-22s %s" % (d, h, w, n_char, n_enum, match))
    lines.append("count: %s" % ("FAIL" if mismatch else "PASS"))
    print("\n".join(lines))
    if args.out:
        csv_lines = ["# catalog %s" % catalog_hash(),
                     "# seed %d  budget %d" % (args.seed, args.budget),
                     "d,h,w,character_sum,enumerated,match"]
        for d, h, w, n_char, n_enum, match in rows:
            csv_lines.append("%d,%d,%d,%d,%s,%s" % (d, h, w, n_char, n_enum, match))
        _write_out(args.out, "\n".join(csv_lines) + "\n")
    return EXIT_FAIL if mismatch else EXIT_PASS


# ---------------------------------------------------------------------------
# validate-moves

def _random_valid_system(rng, params) -> HurwitzSystem:
    d, h, w = params[rng.randrange(len(params))]
    return random_system(d, h, w, rng)


def cmd_validate_moves(args) -> int:
    checks: list[tuple[str, bool, str]] = []

    def check(name: str, ok: bool, note: str = "") -> None:
        checks.append((name, ok, note))

    # every schema instance at small parameters must certify
    try:
        for h in range(0, 3):
            for w in range(1, 7):
                for j in range(1, w):
                    certified_braid_endo(h, w, j)
                for i in range(1, h + 1):
                    certified_push_endo(h, w, i, "a")
                    certified_push_endo(h, w, i, "b")
        check("catalog certification (h<=2, w<=6)", True)
    except CatalogError as exc:
        check("catalog certification (h<=2, w<=6)", False, str(exc))

    params = [(2, 1, 4), (3, 0, 4), (3, 1, 6), (3, 2, 6), (4, 1, 8)]
    rng = random.Random("validate-moves:%d" % args.seed)
    failures: list[str] = []
    braid_rel = braid_comm = braid_inv = push_ok = preserved = 0
    for _ in range(args.samples):
        hs = _random_valid_system(rng, params)
        w = hs.w
        # adjacent braid relation and far commutation
        if w >= 3:
            j = rng.randrange(1, w - 1)
            lhs = braid(braid(braid(hs, j), j + 1), j)
            rhs = braid(braid(braid(hs, j + 1), j), j + 1)
            if lhs != rhs:
                failures.append("braid relation at j=%d on %s" % (j, serialize(hs)))
            else:
                braid_rel += 1
        if w >= 4:
            j = 1
            k = rng.randrange(3, w)
            ab = braid(braid(hs, j), k)
            ba = braid(braid(hs, k), j)
            if ab != ba:
                failures.append("distant braids do not commute on %s" % serialize(hs))
            else:
                braid_comm += 1
        j = rng.randrange(1, w)
        if braid(braid(hs, j), j, inverse_move=True) != hs:
            failures.append("braid inverse at j=%d on %s" % (j, serialize(hs)))
        else:
            braid_inv += 1
        # braids must preserve validity and the exact monodromy subgroup
        moved = braid(hs, j)
        old_grp = monodromy(hs)
        same = (validate(moved).ok
                and monodromy(moved).order() == old_grp.order()
                and all(g in old_grp for g in moved.handles + moved.transpositions))
        if not same:
            failures.append("braid broke an invariant on %s" % serialize(hs))
        else:
            preserved += 1
        if hs.h > 0:
            i = rng.randrange(1, hs.h + 1)
            side = "ab"[rng.randrange(2)]
            try:
                check_push_contract(hs, i, side)
                push_ok += 1
            except MoveError as exc:
                failures.append("push contract (i=%d, %s) on %s: %s"
                                % (i, side, serialize(hs), exc))

    check("braid relation (%d samples)" % braid_rel, braid_rel > 0 and not any(
        "braid relation" in f for f in failures))
    check("distant braid commutation (%d samples)" % braid_comm, not any(
        "commute" in f for f in failures))
    check("braid inverse identity (%d samples)" % braid_inv, not any(
        "braid inverse" in f for f in failures))
    check("moves preserve validity and monodromy (%d samples)" % preserved, not any(
        "invariant" in f for f in failures))
    check("handle-push effect contract (%d samples)" % push_ok, push_ok > 0 and not any(
        "push contract" in f for f in failures))

    lines = _header(args, "samples %d" % args.samples)
    bad = 0
    for name, ok, note in checks:
        lines.append("%-52s %s%s" % (name, "PASS" if ok else "FAIL",
                                     (" " + note) if note else ""))
        bad += 0 if ok else 1
    for f in failures[:10]:
        lines.append("  failure: %s" % f)
    lines.append("validate-moves: %s" % ("PASS" if bad == 0 and not failures else "FAIL"))
    print("\n".join(lines))
    return EXIT_PASS if bad == 0 and not failures else EXIT_FAIL


# ---------------------------------------------------------------------------
# canonicalize

def cmd_canonicalize(args) -> int:
    hs = _load_system(args.system)
    if hs.w < 2 * hs.d or not is_full_monodromy(hs):
        raise UsageError("canonicalize needs w >= 2d and full monodromy")
    try:
        form, cert = canonicalize(hs, mode=args.mode)
    except NormalizeError as exc:
        print("canonicalize: FAIL: %s" % exc)
        return EXIT_FAIL
    n_moves = len(cert.moves.split()) if cert.moves else 0
    print("canonical: %s" % serialize(form))
    print("moves: %d (%s mode, catalog %s)" % (n_moves, args.mode, cert.catalog))
    _write_out(args.out, _cert_json(cert))
    return EXIT_PASS


# ---------------------------------------------------------------------------
# wiring

def _add_common(p, budget=DEFAULT_BUDGET) -> None:
    p.add_argument("--budget", type=int, default=None,
                   help="state budget for searches (default %d)" % budget)
    p.add_argument("--seed", type=int, default=None, help="random seed (default 0)")
    p.add_argument("--threads", type=int, default=None,
                   help="orbit engine workers (default 1)")
    p.add_argument("--out", default=None, help="write the machine-readable report here")
    p.add_argument("--config", default=None,
                   help="JSON file of flag defaults; explicit flags win")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hurwitz",
                                 description=__doc__.split("\n\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="one full-monodromy orbit at each w >= 2d")
    p.add_argument("--case", action="append", metavar="D,H,W",
                   help="a single d,h,w case; repeatable")
    p.add_argument("--d", help="degree range, e.g. 2..4")
    p.add_argument("--h", help="genus range")
    p.add_argument("--w", help="branch point count range")
    p.add_argument("--moves", choices=("braid", "full"), default=None)
    p.add_argument("--method", choices=("auto", "census", "sample"), default="auto")
    p.add_argument("--samples", type=int, default=None,
                   help="random systems per sampled case (default %d)" % DEFAULT_SAMPLES)
    _add_common(p)
    p.set_defaults(fn=cmd_verify)

    for name, fn, blurb in (("explore", cmd_explore, "census with a human report"),
                            ("census", cmd_census, "census as JSONL")):
        p = sub.add_parser(name, help=blurb)
        p.add_argument("--d", type=int, required=True)
        p.add_argument("--h", type=int, required=True)
        p.add_argument("--w", type=int, required=True)
        p.add_argument("--moves", choices=("braid", "full"), default=None)
        p.add_argument("--filter", default=None,
                       help="all | full-monodromy | group=<sizes like 2x1>")
        if name == "census":
            p.add_argument("--log", default=None,
                           help="write the first orbit's predecessor log here")
        _add_common(p)
        p.set_defaults(fn=fn)

    p = sub.add_parser("connect", help="move word between two system files")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--moves", choices=("braid", "full"), default=None)
    _add_common(p)
    p.set_defaults(fn=cmd_connect)

    p = sub.add_parser("replay", help="re-check a certificate or predecessor log")
    p.add_argument("certificate")
    _add_common(p)
    p.set_defaults(fn=cmd_replay)

    p = sub.add_parser("count", help="character-sum counts vs enumeration")
    p.add_argument("--d", help="degree range (default 2..4)")
    p.add_argument("--h", help="genus range (default 0..2)")
    p.add_argument("--w", help="branch point range (default even 0..8)")
    _add_common(p)
    p.set_defaults(fn=cmd_count)

    p = sub.add_parser("validate-moves", help="certify the catalog and move contracts")
    p.add_argument("--samples", type=int, default=None,
                   help="random systems for the property suite (default %d)" % DEFAULT_SAMPLES)
    _add_common(p)
    p.set_defaults(fn=cmd_validate_moves)

    p = sub.add_parser("canonicalize", help="carry a system file to canonical form")
    p.add_argument("system")
    p.add_argument("--mode", choices=("fast", "validate"), default=None)
    _add_common(p)
    p.set_defaults(fn=cmd_canonicalize)
    return ap


def _resolve_defaults(args) -> None:
    """Fill unset flags from the config file, then from hard defaults.
    Explicit flags always win."""
    config = {}
    if getattr(args, "config", None):
        try:
            with open(args.config, encoding="utf-8") as fh:
                config = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError("bad config file %s: %s" % (args.config, exc))
        if not isinstance(config, dict):
            raise UsageError("config file must hold a JSON object")
    hard = {"budget": DEFAULT_BUDGET, "seed": 0, "threads": 1,
            "moves": "full", "filter": "all", "mode": "fast",
            "samples": DEFAULT_SAMPLES}
    for key, fallback in hard.items():
        if not hasattr(args, key):
            continue
        if getattr(args, key) is None:
            setattr(args, key, config.get(key, fallback))


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalize other codes
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        _resolve_defaults(args)
        return args.fn(args)
    except UsageError as exc:
        print("error: %s" % exc, file=_sys.stderr)
        return EXIT_USAGE
    except BudgetError as exc:
        print("inconclusive: %s" % exc, file=_sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    raise SystemExit(main())

"""Command-line front end: ``olpm <command> ...``."""

from __future__ import annotations

import argparse
import sys
import time

from . import fsa as F
from .copycodec import CopyCodecError, spellout_tokens
from .dsl import DslError
from .grammars import CASES, get_grammar, run_case
from .runtime import accepts, optimizing_parse, parse, surface_strings

# ASCII stand-ins used by the grammar files for IPA symbols
TRANSLIT = {"ʔ": "q", "ʃ": "S", "ŋ": "N", "ɾ": "D"}


def transliterate(g, s: str) -> str:
    out = []
    for ch in s:
        if g.h.has(ch):
            out.append(ch)
        elif ch == "ː" and out:
            out.append(out[-1])
        else:
            out.append(TRANSLIT.get(ch, ch))
    return "".join(out)


def cmd_compile(args):
    g = get_grammar(args.grammar, fresh=True)
    names = args.macro or [n for n, a in sorted(set(g.user_macros)) if a == 0]
    for name in names:
        t0 = time.perf_counter()
        a = F.trim(g.fsa(name))
        dt = time.perf_counter() - t0
        print(f"{name}\tstates={a.n}\tarcs={len(a.arcs)}\t{dt:.2f}s")
    return 0


def cmd_generate(args):
    g = get_grammar(args.grammar, fresh=True)
    for w in surface_strings(g.fsa(args.macro), args.max_count, args.max_len):
        print(w)
    return 0


def cmd_parse(args):
    g = get_grammar(args.grammar, fresh=True)
    s = transliterate(g, args.string)
    if args.blo is None:
        a = parse(g, args.macro, s)
    else:
        a = optimizing_parse(g, args.macro, s, args.blo)
    ok = accepts(a)
    print(f"{'accepted' if ok else 'rejected'} {s}")
    return 0 if ok else 1


def cmd_dump(args):
    g = get_grammar(args.grammar, fresh=True)
    a = F.trim(g.fsa(args.macro))
    print(F.to_dot(a) if args.format == "dot" else F.to_table(a))
    return 0


def cmd_golden(args):
    names = args.case or list(CASES)
    unknown = [n for n in names if n not in CASES]
    if unknown:
        raise UsageError(f"unknown case(s): {' '.join(unknown)}")
    failed = 0
    for n in names:
        rep = run_case(n)
        print(rep)
        failed += not rep.passed
    return 1 if failed else 0


def cmd_codec(args):
    print(spellout_tokens(args.tokens, args.reading))
    return 0


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    p = _Parser(prog="olpm", description="One-level prosodic morphology toolkit")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("compile", help="compile zero-arity macros and report sizes")
    c.add_argument("grammar")
    c.add_argument("macro", nargs="*")
    c.set_defaults(fn=cmd_compile)

    c = sub.add_parser("generate", help="print surface strings of a macro")
    c.add_argument("grammar")
    c.add_argument("macro")
    c.add_argument("--max-count", type=int, default=100)
    c.add_argument("--max-len", type=int, default=40)
    c.set_defaults(fn=cmd_generate)

    c = sub.add_parser("parse", help="parse a surface string; exit 1 if rejected")
    c.add_argument("grammar")
    c.add_argument("macro")
    c.add_argument("string")
    c.add_argument("--blo", type=int, metavar="K", help="optimizing parse with look-ahead K")
    c.set_defaults(fn=cmd_parse)

    c = sub.add_parser("dump", help="print a macro's automaton")
    c.add_argument("grammar")
    c.add_argument("macro")
    c.add_argument("--format", choices=("dot", "table"), default="table")
    c.set_defaults(fn=cmd_dump)

    c = sub.add_parser("golden", help="run the built-in case studies")
    c.add_argument("case", nargs="*")
    c.set_defaults(fn=cmd_golden)

    c = sub.add_parser("codec", help="number-of-copies codec")
    csub = c.add_subparsers(dest="codec_command", required=True, parser_class=_Parser)
    s = csub.add_parser("spellout", help="spell out segment:count tokens")
    s.add_argument("tokens", nargs="+")
    s.add_argument("--reading", choices=("literal", "either"), default="literal")
    s.set_defaults(fn=cmd_codec)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.fn(args)
    except UsageError as e:
        print(f"olpm: usage error: {e}", file=sys.stderr)
        return 2
    except FileNotFoundError as e:
        print(f"olpm: {e}", file=sys.stderr)
        return 2
    except (DslError, CopyCodecError) as e:
        print(f"olpm: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

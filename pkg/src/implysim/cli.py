"""Command-line front end: keystream generation, stream encryption,
steganography, cost reports, and shift-plan dumps.

Key/IV hex conventions are per cipher (see ``reference``); keystream bytes
always pack LSB-first.  Message bytes embed MSB-first per byte.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import costs, grain_cim, stego, trivium_cim
from .engine import CsvTrace
from .reference import (
    InputError,
    bits_to_bytes_lsb_first,
    bits_to_bytes_msb_first,
    bytes_to_bits_msb_first,
    grain_key_bits,
    trivium_key_bits,
)
from .shifting import Mode, count_elements, plan_conventional, plan_proposed, write_csv

_CIPHERS = ("trivium", "grain128a")


def _mode(args) -> Mode:
    return Mode(args.mode)


def _key_iv_bits(cipher: str, key_hex: str, iv_hex: str):
    if cipher == "trivium":
        return trivium_key_bits(key_hex, "key"), trivium_key_bits(iv_hex, "iv")
    return grain_key_bits(key_hex, 16, "key"), grain_key_bits(iv_hex, 12, "iv")


def _make_sim(cipher: str, key_hex: str, iv_hex: str, mode: Mode, trace=None):
    key, iv = _key_iv_bits(cipher, key_hex, iv_hex)
    cls = trivium_cim.TriviumSim if cipher == "trivium" else grain_cim.GrainSim
    return cls(key, iv, mode, trace=trace)


def _emit_report(sim, fmt: str, out_path: str | None) -> None:
    report = costs.aggregate(sim)
    text = report.to_json() if fmt == "json" else costs.report_table(report)
    if out_path:
        Path(out_path).write_text(text + "\n")
    else:
        print(text)


def cmd_keystream(args) -> int:
    trace_file = None
    trace = None
    if args.trace:
        trace_file = open(args.trace, "w")
        trace = CsvTrace(trace_file)
    try:
        sim = _make_sim(args.cipher, args.key, args.iv, _mode(args), trace)
        bits = sim.keystream(args.n)
    finally:
        if trace_file:
            trace_file.close()
    if args.format == "hex":
        text = bits_to_bytes_lsb_first(bits).hex()
    else:
        text = "".join(str(b) for b in bits)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    if args.report:
        _emit_report(sim, args.report, args.report_out)
    return 0


def cmd_crypt(args) -> int:
    data = Path(args.infile).read_bytes()
    message = bytes_to_bits_msb_first(data)
    sim = _make_sim(args.cipher, args.key, args.iv, _mode(args))
    ks = sim.keystream(len(message))
    out = bits_to_bytes_msb_first([m ^ k for m, k in zip(message, ks)])
    Path(args.out).write_bytes(out)
    if args.report:
        _emit_report(sim, args.report, args.report_out)
    return 0


def cmd_stego(args) -> int:
    if args.action == "embed":
        cover = stego.read_pgm(args.cover)
        data = Path(args.infile).read_bytes()
        message = bytes_to_bits_msb_first(data)
        sim = _make_sim(args.cipher, args.key, args.iv, _mode(args))
        ks = sim.keystream(len(message))
        payload = stego.StegoPayload([m ^ k for m, k in zip(message, ks)])
        image = stego.embed_lsb(cover, payload)
        stego.write_pgm(image, args.stego)
        print(f"PSNR: {stego.psnr(cover, image):.3f} dB")
        return 0
    image = stego.read_pgm(args.stego)
    payload = stego.extract_lsb(image)
    sim = _make_sim(args.cipher, args.key, args.iv, _mode(args))
    ks = sim.keystream(len(payload.bits))
    plain = stego.StegoPayload([c ^ k for c, k in zip(payload.bits, ks)])
    Path(args.out).write_bytes(plain.to_bytes())
    return 0


_REGISTERS = {
    "A": (trivium_cim.LAYOUTS, "trivium"),
    "B": (trivium_cim.LAYOUTS, "trivium"),
    "C": (trivium_cim.LAYOUTS, "trivium"),
    "LFSR": (grain_cim.LAYOUTS, "grain128a"),
    "NFSR": (grain_cim.LAYOUTS, "grain128a"),
}


def cmd_plan(args) -> int:
    layouts, cipher = _REGISTERS[args.register]
    if args.cipher and args.cipher != cipher:
        print(f"error: register {args.register} belongs to {cipher}", file=sys.stderr)
        return 2
    layout = layouts[args.register]
    planner = plan_proposed if _mode(args) is Mode.PROPOSED else plan_conventional
    plan = planner(layout, args.cycles)
    for t in range(1, args.cycles + 1):
        buffers, inverters = plan.census(t)
        print(f"{t},{buffers},{inverters}")
    buffers, inverters = count_elements(plan, 1, args.cycles)
    print(f"total,{buffers},{inverters}")
    if args.out:
        with open(args.out, "w") as f:
            write_csv(plan, f, args.cycles)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="implysim",
        description="Serial IMPLY in-memory stream ciphers: simulation, costs, steganography.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, n_flag=False):
        p.add_argument("--cipher", choices=_CIPHERS, required=True)
        p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.PROPOSED.value)
        p.add_argument("--key", required=True, help="hex key (trivium: 20 chars, grain128a: 32)")
        p.add_argument("--iv", required=True, help="hex IV (trivium: 20 chars, grain128a: 24)")
        if n_flag:
            p.add_argument("-n", type=int, required=True, help="number of keystream bits")
        p.add_argument("--report", choices=["json", "table"], help="print a cost report")
        p.add_argument("--report-out", help="write the cost report here instead of stdout")

    p = sub.add_parser("keystream", help="generate keystream bits")
    common(p, n_flag=True)
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=["hex", "bits"], default="hex")
    p.add_argument("--trace", help="write a per-micro-op CSV trace to this path")
    p.set_defaults(fn=cmd_keystream)

    p = sub.add_parser("crypt", help="XOR a file with the keystream (en/decrypt)")
    common(p)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_crypt)

    p = sub.add_parser("stego", help="LSB-embed an encrypted message in a PGM image")
    p.add_argument("action", choices=["embed", "extract"])
    common(p)
    p.add_argument("--cover", help="cover PGM (embed)")
    p.add_argument("--in", dest="infile", help="message file (embed)")
    p.add_argument("--stego", required=True, help="stego PGM path")
    p.add_argument("--out", help="recovered message path (extract)")
    p.set_defaults(fn=cmd_stego)

    p = sub.add_parser("plan", help="dump a register's shift plan and element counts")
    p.add_argument("--cipher", choices=_CIPHERS)
    p.add_argument("--register", choices=list(_REGISTERS), required=True)
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.PROPOSED.value)
    p.add_argument("--cycles", type=int, default=1)
    p.add_argument("--out", help="write per-transfer CSV here")
    p.set_defaults(fn=cmd_plan)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "stego":
        if args.action == "embed" and not (args.cover and args.infile):
            parser.error("stego embed requires --cover and --in")
        if args.action == "extract" and not args.out:
            parser.error("stego extract requires --out")
    try:
        return args.fn(args)
    except (InputError, stego.CapacityError, stego.FormatError, stego.CorruptPayloadError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

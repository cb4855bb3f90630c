"""Decode and re-encode JVM method bytecode.

Round-trip fidelity of untouched methods is guaranteed by keeping the raw
code bytes in the model; this codec is used when instruction operands must
be rewritten (constant-pool permutation). Re-encoding picks the minimal
width for pool-index instructions (ldc vs ldc_w), so a permutation that
pushes an index past 255 is handled, including the branch-offset and
switch-padding fixups that the width change causes.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

from .errors import ClassFileError, Truncated

# operand kinds
N = "none"
L1 = "local_u1"
S1 = "imm_s1"
S2 = "imm_s2"
C1 = "cp_u1"
C2 = "cp_u2"
B2 = "branch_s2"
B4 = "branch_s4"
IC = "iinc"
NA = "newarray"
II = "invokeinterface"
ID = "invokedynamic"
MA = "multianewarray"
W = "wide"
TS = "tableswitch"
LS = "lookupswitch"

_DEF = {}


def _op(code, mnemonic, kind=N):
    _DEF[code] = (mnemonic, kind)


_op(0x00, "nop")
_op(0x01, "aconst_null")
for _i in range(7):
    _op(0x02 + _i, f"iconst_{'m1' if _i == 0 else _i - 1}")
_op(0x09, "lconst_0"), _op(0x0A, "lconst_1")
_op(0x0B, "fconst_0"), _op(0x0C, "fconst_1"), _op(0x0D, "fconst_2")
_op(0x0E, "dconst_0"), _op(0x0F, "dconst_1")
_op(0x10, "bipush", S1)
_op(0x11, "sipush", S2)
_op(0x12, "ldc", C1)
_op(0x13, "ldc_w", C2)
_op(0x14, "ldc2_w", C2)
for _i, _t in enumerate("ilfda"):
    _op(0x15 + _i, f"{_t}load", L1)
for _j, _t in enumerate("ilfda"):
    for _n in range(4):
        _op(0x1A + 4 * _j + _n, f"{_t}load_{_n}")
for _i, _t in enumerate("ilfdabcs"):
    _op(0x2E + _i, f"{_t}aload")
for _i, _t in enumerate("ilfda"):
    _op(0x36 + _i, f"{_t}store", L1)
for _j, _t in enumerate("ilfda"):
    for _n in range(4):
        _op(0x3B + 4 * _j + _n, f"{_t}store_{_n}")
for _i, _t in enumerate("ilfdabcs"):
    _op(0x4F + _i, f"{_t}astore")
for _i, _m in enumerate(
    ["pop", "pop2", "dup", "dup_x1", "dup_x2", "dup2", "dup2_x1", "dup2_x2", "swap"]
):
    _op(0x57 + _i, _m)
for _i, _m in enumerate(
    [
        "iadd", "ladd", "fadd", "dadd", "isub", "lsub", "fsub", "dsub",
        "imul", "lmul", "fmul", "dmul", "idiv", "ldiv", "fdiv", "ddiv",
        "irem", "lrem", "frem", "drem", "ineg", "lneg", "fneg", "dneg",
        "ishl", "lshl", "ishr", "lshr", "iushr", "lushr",
        "iand", "land", "ior", "lor", "ixor", "lxor",
    ]
):
    _op(0x60 + _i, _m)
_op(0x84, "iinc", IC)
for _i, _m in enumerate(
    [
        "i2l", "i2f", "i2d", "l2i", "l2f", "l2d", "f2i", "f2l", "f2d",
        "d2i", "d2l", "d2f", "i2b", "i2c", "i2s",
    ]
):
    _op(0x85 + _i, _m)
for _i, _m in enumerate(["lcmp", "fcmpl", "fcmpg", "dcmpl", "dcmpg"]):
    _op(0x94 + _i, _m)
for _i, _m in enumerate(
    [
        "ifeq", "ifne", "iflt", "ifge", "ifgt", "ifle",
        "if_icmpeq", "if_icmpne", "if_icmplt", "if_icmpge", "if_icmpgt", "if_icmple",
        "if_acmpeq", "if_acmpne",
    ]
):
    _op(0x99 + _i, _m, B2)
_op(0xA7, "goto", B2)
_op(0xA8, "jsr", B2)
_op(0xA9, "ret", L1)
_op(0xAA, "tableswitch", TS)
_op(0xAB, "lookupswitch", LS)
for _i, _m in enumerate(["ireturn", "lreturn", "freturn", "dreturn", "areturn", "return"]):
    _op(0xAC + _i, _m)
_op(0xB2, "getstatic", C2)
_op(0xB3, "putstatic", C2)
_op(0xB4, "getfield", C2)
_op(0xB5, "putfield", C2)
_op(0xB6, "invokevirtual", C2)
_op(0xB7, "invokespecial", C2)
_op(0xB8, "invokestatic", C2)
_op(0xB9, "invokeinterface", II)
_op(0xBA, "invokedynamic", ID)
_op(0xBB, "new", C2)
_op(0xBC, "newarray", NA)
_op(0xBD, "anewarray", C2)
_op(0xBE, "arraylength")
_op(0xBF, "athrow")
_op(0xC0, "checkcast", C2)
_op(0xC1, "instanceof", C2)
_op(0xC2, "monitorenter")
_op(0xC3, "monitorexit")
_op(0xC4, "wide", W)
_op(0xC5, "multianewarray", MA)
_op(0xC6, "ifnull", B2)
_op(0xC7, "ifnonnull", B2)
_op(0xC8, "goto_w", B4)
_op(0xC9, "jsr_w", B4)

OPCODE_BY_MNEMONIC = {m: c for c, (m, _) in _DEF.items()}

LDC = OPCODE_BY_MNEMONIC["ldc"]
LDC_W = OPCODE_BY_MNEMONIC["ldc_w"]


@dataclass
class Instruction:
    """One decoded instruction.

    ``target``/``targets`` hold branch destinations. After decode they are
    absolute byte offsets within the method; :func:`to_index_targets`
    rewrites them to instruction indices so the list can be re-encoded
    after size-changing edits.
    """

    opcode: int
    offset: int = 0
    local: int | None = None
    imm: int | None = None
    cp: int | None = None
    target: int | None = None
    default: int | None = None
    low: int | None = None
    high: int | None = None
    targets: tuple = ()
    match_keys: tuple = ()
    count: int | None = None  # invokeinterface
    dims: int | None = None  # multianewarray
    atype: int | None = None  # newarray
    wide: bool = False

    @property
    def mnemonic(self) -> str:
        return _DEF[self.opcode][0]

    @property
    def kind(self) -> str:
        return _DEF[self.opcode][1]


def decode_instructions(code: bytes) -> list:
    out = []
    pos = 0
    n = len(code)
    while pos < n:
        start = pos
        opcode = code[pos]
        pos += 1
        if opcode not in _DEF:
            raise ClassFileError(f"unknown opcode 0x{opcode:02X}", offset=start)
        mnemonic, kind = _DEF[opcode]
        ins = Instruction(opcode=opcode, offset=start)
        if kind == N:
            pass
        elif kind == L1:
            ins.local = code[pos]
            pos += 1
        elif kind == S1:
            ins.imm = struct.unpack_from(">b", code, pos)[0]
            pos += 1
        elif kind == S2:
            ins.imm = struct.unpack_from(">h", code, pos)[0]
            pos += 2
        elif kind == C1:
            ins.cp = code[pos]
            pos += 1
        elif kind == C2:
            ins.cp = struct.unpack_from(">H", code, pos)[0]
            pos += 2
        elif kind == B2:
            ins.target = start + struct.unpack_from(">h", code, pos)[0]
            pos += 2
        elif kind == B4:
            ins.target = start + struct.unpack_from(">i", code, pos)[0]
            pos += 4
        elif kind == IC:
            ins.local = code[pos]
            ins.imm = struct.unpack_from(">b", code, pos + 1)[0]
            pos += 2
        elif kind == NA:
            ins.atype = code[pos]
            pos += 1
        elif kind == II:
            ins.cp, ins.count = struct.unpack_from(">HB", code, pos)[:2]
            pos += 4  # trailing zero byte
        elif kind == ID:
            ins.cp = struct.unpack_from(">H", code, pos)[0]
            pos += 4  # two trailing zero bytes
        elif kind == MA:
            ins.cp = struct.unpack_from(">H", code, pos)[0]
            ins.dims = code[pos + 2]
            pos += 3
        elif kind == W:
            ins.wide = True
            wide_op = code[pos]
            pos += 1
            ins.opcode = wide_op
            ins.local = struct.unpack_from(">H", code, pos)[0]
            pos += 2
            if _DEF[wide_op][0] == "iinc":
                ins.imm = struct.unpack_from(">h", code, pos)[0]
                pos += 2
        elif kind == TS:
            pad = (4 - (pos % 4)) % 4
            pos += pad
            default, low, high = struct.unpack_from(">iii", code, pos)
            pos += 12
            count = high - low + 1
            ins.default = start + default
            ins.low, ins.high = low, high
            ins.targets = tuple(
                start + struct.unpack_from(">i", code, pos + 4 * i)[0]
                for i in range(count)
            )
            pos += 4 * count
        elif kind == LS:
            pad = (4 - (pos % 4)) % 4
            pos += pad
            default, npairs = struct.unpack_from(">ii", code, pos)
            pos += 8
            ins.default = start + default
            keys, targets = [], []
            for i in range(npairs):
                k, t = struct.unpack_from(">ii", code, pos)
                keys.append(k)
                targets.append(start + t)
                pos += 8
            ins.match_keys = tuple(keys)
            ins.targets = tuple(targets)
        if pos > n:
            raise Truncated("code ends mid-instruction", offset=start)
        out.append(ins)
    return out


def to_index_targets(instructions: list) -> list:
    """Convert byte-offset branch targets to instruction indices, in place."""
    index_of = {ins.offset: i for i, ins in enumerate(instructions)}
    end = (
        instructions[-1].offset + _size_at(instructions[-1], instructions[-1].offset)
        if instructions
        else 0
    )
    index_of[end] = len(instructions)

    def conv(off):
        if off not in index_of:
            raise ClassFileError(f"branch target {off} is not an instruction start")
        return index_of[off]

    for ins in instructions:
        if ins.target is not None:
            ins.target = conv(ins.target)
        if ins.default is not None:
            ins.default = conv(ins.default)
        if ins.targets:
            ins.targets = tuple(conv(t) for t in ins.targets)
    return instructions


def _size_at(ins: Instruction, offset: int) -> int:
    kind = ins.kind
    if ins.wide:
        return 6 if ins.mnemonic == "iinc" else 4
    if kind == N:
        return 1
    if kind in (L1, S1, C1, NA):
        return 2
    if kind in (S2, C2, B2, IC):
        return 3
    if kind == MA:
        return 4
    if kind in (B4, II, ID):
        return 5
    if kind == TS:
        pad = (4 - ((offset + 1) % 4)) % 4
        return 1 + pad + 12 + 4 * len(ins.targets)
    if kind == LS:
        pad = (4 - ((offset + 1) % 4)) % 4
        return 1 + pad + 8 + 8 * len(ins.targets)
    raise ClassFileError(f"unsized instruction {ins.mnemonic}")


def _choose_widths(instructions: list):
    """Flip ldc/ldc_w (and local-var widths) to fit current operand values."""
    for ins in instructions:
        if ins.opcode in (LDC, LDC_W):
            ins.opcode = LDC if ins.cp <= 0xFF else LDC_W
        elif ins.kind == L1 or (ins.kind == IC and not ins.wide):
            if ins.local is not None and ins.local > 0xFF:
                ins.wide = True
        if ins.kind == IC and ins.imm is not None and not (-128 <= ins.imm <= 127):
            ins.wide = True


def encode_instructions(instructions: list) -> tuple:
    """Encode instructions whose branch targets are instruction indices.

    Returns ``(code_bytes, offsets)`` where ``offsets[i]`` is the byte
    offset of instruction i (plus one extra entry for the method end).
    Layout is iterated to a fixpoint because switch padding depends on
    offsets.
    """
    _choose_widths(instructions)
    offsets = [0] * (len(instructions) + 1)
    for _ in range(10):
        pos = 0
        changed = False
        for i, ins in enumerate(instructions):
            if offsets[i] != pos:
                offsets[i] = pos
                changed = True
            pos += _size_at(ins, pos)
        if offsets[-1] != pos:
            offsets[-1] = pos
            changed = True
        if not changed:
            break
    else:
        raise ClassFileError("instruction layout did not stabilize")

    out = bytearray()
    for i, ins in enumerate(instructions):
        start = offsets[i]
        out += _encode_one(ins, start, offsets)
    return bytes(out), offsets


def _encode_one(ins: Instruction, start: int, offsets: list) -> bytes:
    kind = ins.kind
    b = bytearray()
    if ins.wide:
        b.append(0xC4)
        b.append(ins.opcode)
        b += struct.pack(">H", ins.local)
        if ins.mnemonic == "iinc":
            b += struct.pack(">h", ins.imm)
        return bytes(b)
    b.append(ins.opcode)
    if kind == N:
        pass
    elif kind == L1:
        b.append(ins.local)
    elif kind == S1:
        b += struct.pack(">b", ins.imm)
    elif kind == S2:
        b += struct.pack(">h", ins.imm)
    elif kind == C1:
        b.append(ins.cp)
    elif kind == C2:
        b += struct.pack(">H", ins.cp)
    elif kind == B2:
        rel = offsets[ins.target] - start
        if not -0x8000 <= rel <= 0x7FFF:
            raise ClassFileError(f"branch offset {rel} does not fit s2")
        b += struct.pack(">h", rel)
    elif kind == B4:
        b += struct.pack(">i", offsets[ins.target] - start)
    elif kind == IC:
        b.append(ins.local)
        b += struct.pack(">b", ins.imm)
    elif kind == NA:
        b.append(ins.atype)
    elif kind == II:
        b += struct.pack(">HBB", ins.cp, ins.count, 0)
    elif kind == ID:
        b += struct.pack(">HH", ins.cp, 0)
    elif kind == MA:
        b += struct.pack(">HB", ins.cp, ins.dims)
    elif kind == TS:
        pad = (4 - ((start + 1) % 4)) % 4
        b += b"\x00" * pad
        b += struct.pack(">iii", offsets[ins.default] - start, ins.low, ins.high)
        for t in ins.targets:
            b += struct.pack(">i", offsets[t] - start)
    elif kind == LS:
        pad = (4 - ((start + 1) % 4)) % 4
        b += b"\x00" * pad
        b += struct.pack(">ii", offsets[ins.default] - start, len(ins.targets))
        for k, t in zip(ins.match_keys, ins.targets):
            b += struct.pack(">ii", k, offsets[t] - start)
    else:
        raise ClassFileError(f"cannot encode {ins.mnemonic}")
    return bytes(b)

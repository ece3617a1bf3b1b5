/**
 * Minimal pickle reader for the Planetoid distribution files.
 *
 * The eight files per dataset were written by Python 2 cPickle at protocol 2
 * and contain exactly four kinds of objects: scipy CSR matrices, numpy
 * arrays, a collections.defaultdict of adjacency lists, and the primitives
 * inside them. This loader implements just the opcode subset those files
 * use and reconstructs typed-array views instead of Python objects.
 */

export class DType {
  constructor(public code: string, public littleEndian = true) {}
}

export type DecodedArray = Float32Array | Float64Array | Int32Array | Int8Array;

export class NDArray {
  dtype: DType | null = null;
  shape: number[] = [];
  raw: Buffer | null = null;
  private decoded: DecodedArray | null = null;

  /** Decode the raw buffer into a JS typed array (little-endian data);
   * decoded once and cached. */
  values(): DecodedArray {
    if (this.decoded) return this.decoded;
    this.decoded = this.decode();
    return this.decoded;
  }

  private decode(): DecodedArray {
    if (!this.dtype || !this.raw) throw new Error("ndarray state incomplete");
    const buf = this.raw;
    const aligned = Buffer.from(buf); // copy ensures alignment
    const ab = aligned.buffer.slice(
      aligned.byteOffset,
      aligned.byteOffset + aligned.byteLength
    );
    switch (this.dtype.code) {
      case "f4":
        return new Float32Array(ab);
      case "f8":
        return new Float64Array(ab);
      case "i4":
        return new Int32Array(ab);
      case "i1":
      case "b1":
        return new Int8Array(ab);
      default:
        throw new Error(`unsupported dtype ${this.dtype.code}`);
    }
  }
}

export class SparseCsr {
  shape: [number, number] = [0, 0];
  data!: NDArray;
  indices!: NDArray;
  indptr!: NDArray;
}

class GlobalRef {
  constructor(public module: string, public name: string) {}
  get id(): string {
    return `${this.module} ${this.name}`;
  }
}

type PyValue = unknown;

const MARK_SENTINEL = Symbol("mark");

export class Unpickler {
  private pos = 0;
  private stack: PyValue[] = [];
  private memo = new Map<number, PyValue>();

  constructor(private buf: Buffer) {}

  private u8(): number {
    return this.buf.readUInt8(this.pos++);
  }

  private u16(): number {
    const v = this.buf.readUInt16LE(this.pos);
    this.pos += 2;
    return v;
  }

  private i32(): number {
    const v = this.buf.readInt32LE(this.pos);
    this.pos += 4;
    return v;
  }

  private u32(): number {
    const v = this.buf.readUInt32LE(this.pos);
    this.pos += 4;
    return v;
  }

  private line(): string {
    const end = this.buf.indexOf(0x0a, this.pos);
    if (end < 0) throw new Error("unterminated opcode argument line");
    const s = this.buf.toString("latin1", this.pos, end);
    this.pos = end + 1;
    return s;
  }

  private bytes(n: number): Buffer {
    const b = this.buf.subarray(this.pos, this.pos + n);
    if (b.length !== n) throw new Error("truncated pickle string");
    this.pos += n;
    return b;
  }

  private popMark(): PyValue[] {
    const items: PyValue[] = [];
    for (;;) {
      if (this.stack.length === 0) throw new Error("mark not found");
      const top = this.stack.pop();
      if (top === MARK_SENTINEL) break;
      items.push(top);
    }
    return items.reverse();
  }

  private reduce(callable: PyValue, args: PyValue[]): PyValue {
    if (!(callable instanceof GlobalRef)) {
      throw new Error("REDUCE callable is not a global reference");
    }
    switch (callable.id) {
      case "collections defaultdict":
        return new Map<PyValue, PyValue>();
      case "numpy.core.multiarray _reconstruct":
        return new NDArray();
      case "numpy dtype": {
        const code = args[0];
        if (typeof code !== "string") throw new Error("dtype code not a string");
        return new DType(code);
      }
      default:
        throw new Error(`unsupported global in REDUCE: ${callable.id}`);
    }
  }

  private newobj(cls: PyValue, args: PyValue[]): PyValue {
    if (cls instanceof GlobalRef && cls.id === "scipy.sparse.csr csr_matrix") {
      if (args.length) throw new Error("unexpected csr_matrix constructor args");
      return new SparseCsr();
    }
    throw new Error("unsupported class in NEWOBJ");
  }

  private build(obj: PyValue, state: PyValue): PyValue {
    if (obj instanceof NDArray) {
      const s = state as PyValue[];
      // state: (version, shape, dtype, is_fortran, raw_bytes)
      obj.shape = (s[1] as number[]).map(Number);
      obj.dtype = s[2] as DType;
      if (s[3]) throw new Error("Fortran-ordered arrays not supported");
      if (typeof s[4] !== "string") throw new Error("ndarray data is not a byte string");
      obj.raw = Buffer.from(s[4], "latin1");
      return obj;
    }
    if (obj instanceof DType) {
      // state: (version, byteorder, subarray, names, fields, elsize, align, flags)
      const order = (state as PyValue[])[1];
      if (order === ">") throw new Error("big-endian arrays not supported");
      return obj;
    }
    if (obj instanceof SparseCsr) {
      const dict = state as Map<string, PyValue>;
      const shape = dict.get("_shape") as number[];
      obj.shape = [Number(shape[0]), Number(shape[1])];
      obj.data = dict.get("data") as NDArray;
      obj.indices = dict.get("indices") as NDArray;
      obj.indptr = dict.get("indptr") as NDArray;
      return obj;
    }
    throw new Error("BUILD on unsupported object");
  }

  load(): PyValue {
    const S = this.stack;
    for (;;) {
      const op = this.u8();
      switch (op) {
        case 0x80: // PROTO
          this.u8();
          break;
        case 0x2e: // STOP
          return S.pop();
        case 0x28: // MARK
          S.push(MARK_SENTINEL);
          break;
        case 0x63: { // GLOBAL
          const module = this.line();
          const name = this.line();
          S.push(new GlobalRef(module, name));
          break;
        }
        case 0x71: // BINPUT
          this.memo.set(this.u8(), S[S.length - 1]);
          break;
        case 0x72: // LONG_BINPUT
          this.memo.set(this.u32(), S[S.length - 1]);
          break;
        case 0x68: // BINGET
          S.push(this.memo.get(this.u8()));
          break;
        case 0x6a: // LONG_BINGET
          S.push(this.memo.get(this.u32()));
          break;
        case 0x4e: // NONE
          S.push(null);
          break;
        case 0x88: // NEWTRUE
          S.push(true);
          break;
        case 0x89: // NEWFALSE
          S.push(false);
          break;
        case 0x4a: // BININT
          S.push(this.i32());
          break;
        case 0x4b: // BININT1
          S.push(this.u8());
          break;
        case 0x4d: // BININT2
          S.push(this.u16());
          break;
        case 0x55: // SHORT_BINSTRING
          S.push(this.readString(this.u8()));
          break;
        case 0x54: // BINSTRING
          S.push(this.readString(this.i32()));
          break;
        case 0x5d: // EMPTY_LIST
          S.push([]);
          break;
        case 0x7d: // EMPTY_DICT
          S.push(new Map<PyValue, PyValue>());
          break;
        case 0x29: // EMPTY_TUPLE
          S.push([]);
          break;
        case 0x74: // TUPLE
          S.push(this.popMark());
          break;
        case 0x85: // TUPLE1
          S.push([S.pop()]);
          break;
        case 0x86: { // TUPLE2
          const b = S.pop();
          const a = S.pop();
          S.push([a, b]);
          break;
        }
        case 0x87: { // TUPLE3
          const c = S.pop();
          const b = S.pop();
          const a = S.pop();
          S.push([a, b, c]);
          break;
        }
        case 0x61: { // APPEND
          const v = S.pop();
          (S[S.length - 1] as PyValue[]).push(v);
          break;
        }
        case 0x65: { // APPENDS
          const items = this.popMark();
          (S[S.length - 1] as PyValue[]).push(...items);
          break;
        }
        case 0x75: { // SETITEMS
          const items = this.popMark();
          const dict = S[S.length - 1] as Map<PyValue, PyValue>;
          for (let i = 0; i < items.length; i += 2) dict.set(items[i], items[i + 1]);
          break;
        }
        case 0x52: { // REDUCE
          const args = S.pop() as PyValue[];
          const callable = S.pop();
          S.push(this.reduce(callable, args));
          break;
        }
        case 0x81: { // NEWOBJ
          const args = S.pop() as PyValue[];
          const cls = S.pop();
          S.push(this.newobj(cls, args));
          break;
        }
        case 0x62: { // BUILD
          const state = S.pop();
          const obj = S.pop();
          S.push(this.build(obj, state));
          break;
        }
        default:
          throw new Error(
            `unsupported pickle opcode 0x${op.toString(16)} at offset ${this.pos - 1}`
          );
      }
    }
  }

  /** Python 2 str payloads decoded as latin1, which round-trips every byte
   * value exactly; consumers that need raw bytes re-encode with latin1. */
  private readString(n: number): string {
    return this.bytes(n).toString("latin1");
  }
}

export function unpickle(buf: Buffer): unknown {
  return new Unpickler(buf).load();
}

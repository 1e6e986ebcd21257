// Varint / zigzag / field-framing decode, per docs/format.md section 1.
// 64-bit values are handled as BigInt and only narrowed to Number where a
// value is known to fit the safe-integer range.

export enum WireType {
  Varint = 0,
  Fixed64 = 1,
  LengthDelimited = 2,
  Fixed32 = 5,
}

export interface WireField {
  fieldNumber: number;
  wireType: WireType;
  // Varint fields decode to bigint; fixed/length-delimited keep their bytes.
  varint?: bigint;
  bytes?: Uint8Array;
}

export function decodeUvarint(data: Uint8Array, offset: number): [bigint, number] {
  let result = 0n;
  let shift = 0n;
  let pos = offset;
  for (;;) {
    if (pos >= data.length) {
      throw new Error(`truncated varint at offset ${offset}`);
    }
    const byte = data[pos];
    pos += 1;
    const consumed = pos - offset;
    if (consumed === 10) {
      if (byte >= 0x80) throw new Error(`varint at ${offset} is longer than 10 bytes`);
      if (byte > 0x01) throw new Error(`varint at ${offset} overflows 64 bits`);
    }
    result |= BigInt(byte & 0x7f) << shift;
    if (byte < 0x80) {
      if (byte === 0 && consumed > 1) {
        throw new Error(`varint at ${offset} is not canonical`);
      }
      return [result, consumed];
    }
    shift += 7n;
  }
}

export function zigzagDecode(u: bigint): bigint {
  return (u >> 1n) ^ -(u & 1n);
}

export function decodePackedUvarints(data: Uint8Array): bigint[] {
  const out: bigint[] = [];
  let pos = 0;
  while (pos < data.length) {
    const [value, used] = decodeUvarint(data, pos);
    out.push(value);
    pos += used;
  }
  return out;
}

export function readMessageFields(data: Uint8Array): WireField[] {
  const fields: WireField[] = [];
  let pos = 0;
  while (pos < data.length) {
    const [key, keyLen] = decodeUvarint(data, pos);
    pos += keyLen;
    const wireType = Number(key & 7n);
    const fieldNumber = Number(key >> 3n);
    if (fieldNumber < 1) throw new Error(`field number ${fieldNumber} below 1`);
    switch (wireType) {
      case WireType.Varint: {
        const [value, used] = decodeUvarint(data, pos);
        pos += used;
        fields.push({ fieldNumber, wireType, varint: value });
        break;
      }
      case WireType.Fixed64: {
        if (pos + 8 > data.length) throw new Error("fixed64 payload truncated");
        fields.push({ fieldNumber, wireType, bytes: data.subarray(pos, pos + 8) });
        pos += 8;
        break;
      }
      case WireType.Fixed32: {
        if (pos + 4 > data.length) throw new Error("fixed32 payload truncated");
        fields.push({ fieldNumber, wireType, bytes: data.subarray(pos, pos + 4) });
        pos += 4;
        break;
      }
      case WireType.LengthDelimited: {
        const [length, used] = decodeUvarint(data, pos);
        pos += used;
        const size = Number(length);
        if (pos + size > data.length) throw new Error("length-delimited payload truncated");
        fields.push({ fieldNumber, wireType, bytes: data.subarray(pos, pos + size) });
        pos += size;
        break;
      }
      default:
        throw new Error(`unknown wire type ${wireType} for field ${fieldNumber}`);
    }
  }
  return fields;
}

export function readFixed64(bytes: Uint8Array): number {
  const view = new DataView(bytes.buffer, bytes.byteOffset, bytes.byteLength);
  return view.getFloat64(0, true);
}

export function toSafeNumber(value: bigint): number {
  if (value > BigInt(Number.MAX_SAFE_INTEGER) || value < -BigInt(Number.MAX_SAFE_INTEGER)) {
    throw new Error(`${value} exceeds the JSON-safe integer range`);
  }
  return Number(value);
}

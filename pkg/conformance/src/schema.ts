// Embedded-schema parsing and schema-driven message decoding, per
// docs/format.md section 5, plus the canonical JSON event shape of
// section 6. Nothing here knows the field tables a priori; everything
// flows from the schema text carried in the file.

import {
  WireType,
  decodePackedUvarints,
  readFixed64,
  readMessageFields,
  toSafeNumber,
  zigzagDecode,
} from "./wire";

const KINDS = new Set([
  "varint", "zigzag", "fixed64", "bytes", "message",
  "packed-varint", "packed-zigzag",
]);

export interface FieldSpec {
  number: number;
  kind: string;
  name: string;
  unit: "momentum" | "length" | null;
}

export type SchemaTable = Map<string, Map<number, FieldSpec>>;

export interface Units {
  momentum: number;
  length: number;
}

export function parseSchema(text: string): SchemaTable {
  const table: SchemaTable = new Map();
  let current: Map<number, FieldSpec> | null = null;
  let currentName = "";
  const lines = text.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (line === "") continue;
    const lineno = i + 1;
    const tokens = line.split(/\s+/);
    if (tokens[0] === "message") {
      if (current !== null) throw new Error(`line ${lineno}: nested message`);
      if (tokens.length !== 2) throw new Error(`line ${lineno}: expected 'message <Name>'`);
      if (table.has(tokens[1])) throw new Error(`line ${lineno}: duplicate message`);
      currentName = tokens[1];
      current = new Map();
    } else if (tokens[0] === "end") {
      if (current === null) throw new Error(`line ${lineno}: 'end' outside a message`);
      table.set(currentName, current);
      current = null;
    } else {
      if (current === null) throw new Error(`line ${lineno}: field outside a message`);
      if (tokens.length !== 3 && tokens.length !== 4) {
        throw new Error(`line ${lineno}: expected '<number> <kind> <name> [unit:...]'`);
      }
      const number = Number(tokens[0]);
      if (!Number.isInteger(number) || number < 1) {
        throw new Error(`line ${lineno}: bad field number ${tokens[0]}`);
      }
      if (!KINDS.has(tokens[1])) throw new Error(`line ${lineno}: unknown kind ${tokens[1]}`);
      let unit: FieldSpec["unit"] = null;
      if (tokens.length === 4) {
        const match = /^unit:(momentum|length|none)$/.exec(tokens[3]);
        if (!match) throw new Error(`line ${lineno}: bad annotation ${tokens[3]}`);
        unit = match[1] === "none" ? null : (match[1] as FieldSpec["unit"]);
      }
      if (current.has(number)) {
        throw new Error(`line ${lineno}: duplicate field number ${number}`);
      }
      current.set(number, { number, kind: tokens[1], name: tokens[2], unit });
    }
  }
  if (current !== null) throw new Error(`message ${currentName} missing 'end'`);
  return table;
}

export type TreeValue =
  | bigint
  | number
  | number[]
  | bigint[]
  | Uint8Array
  | TreePair[];
export type TreePair = [string, TreeValue];

export function genericDecode(
  data: Uint8Array,
  table: SchemaTable,
  messageName: string,
  units: Units | null,
): TreePair[] {
  const specs = table.get(messageName);
  if (specs === undefined) throw new Error(`schema has no message ${messageName}`);
  const tree: TreePair[] = [];
  for (const field of readMessageFields(data)) {
    const spec = specs.get(field.fieldNumber);
    if (spec === undefined) {
      tree.push([`unknown_${field.fieldNumber}`, field.bytes ?? field.varint!]);
      continue;
    }
    switch (spec.kind) {
      case "varint":
        expectWire(field.wireType, WireType.Varint, spec);
        tree.push([spec.name, field.varint!]);
        break;
      case "zigzag":
        expectWire(field.wireType, WireType.Varint, spec);
        tree.push([spec.name, zigzagDecode(field.varint!)]);
        break;
      case "fixed64":
        expectWire(field.wireType, WireType.Fixed64, spec);
        tree.push([spec.name, readFixed64(field.bytes!)]);
        break;
      case "bytes":
        expectWire(field.wireType, WireType.LengthDelimited, spec);
        tree.push([spec.name, field.bytes!]);
        break;
      case "message":
        expectWire(field.wireType, WireType.LengthDelimited, spec);
        tree.push([spec.name, genericDecode(field.bytes!, table, spec.name, units)]);
        break;
      default: {
        expectWire(field.wireType, WireType.LengthDelimited, spec);
        let values = decodePackedUvarints(field.bytes!);
        if (spec.kind === "packed-zigzag") values = values.map(zigzagDecode);
        if (spec.unit !== null && units !== null) {
          const unit = spec.unit === "momentum" ? units.momentum : units.length;
          tree.push([spec.name, values.map((q) => Number(q) / unit)]);
        } else {
          tree.push([spec.name, values]);
        }
      }
    }
  }
  return tree;
}

function expectWire(got: WireType, expected: WireType, spec: FieldSpec): void {
  if (got !== expected) {
    throw new Error(`field ${spec.name}: wire type ${got}, schema expects ${expected}`);
  }
}

const LINK_COLUMNS = new Set(["mother1", "mother2", "daughter1", "daughter2"]);
const COLUMN_NAMES = [
  "pdg_id", "status", "px", "py", "pz", "mass",
  "mother1", "mother2", "daughter1", "daughter2",
  "barcode", "x", "y", "z", "t",
];

export interface EventJson {
  event_number: number;
  process_id: number;
  weight: number;
  particles: Record<string, number[]>;
}

export function eventJsonFromTree(tree: TreePair[]): EventJson {
  const out: EventJson = {
    event_number: 0,
    process_id: 0,
    weight: 1.0,
    particles: {},
  };
  for (const name of COLUMN_NAMES) out.particles[name] = [];
  for (const [name, value] of tree) {
    if (name === "ParticleBlock") {
      for (const [columnName, column] of value as TreePair[]) {
        if (columnName.startsWith("unknown_")) continue;
        const values = column as (number | bigint)[];
        if (LINK_COLUMNS.has(columnName)) {
          out.particles[columnName] = values.map((v) => toSafeNumber(v as bigint) - 1);
        } else if (typeof values[0] === "bigint") {
          out.particles[columnName] = (values as bigint[]).map(toSafeNumber);
        } else {
          out.particles[columnName] = values as number[];
        }
      }
    } else if (name === "event_number" || name === "process_id") {
      out[name] = toSafeNumber(value as bigint);
    } else if (name === "weight") {
      out.weight = value as number;
    }
  }
  return out;
}

// JSON with recursively sorted keys, matching the primary output after parsing.
export function canonicalJson(value: unknown): string {
  return JSON.stringify(sortKeys(value));
}

function sortKeys(value: unknown): unknown {
  if (Array.isArray(value)) return value.map(sortKeys);
  if (value !== null && typeof value === "object") {
    const out: Record<string, unknown> = {};
    for (const key of Object.keys(value as object).sort()) {
      out[key] = sortKeys((value as Record<string, unknown>)[key]);
    }
    return out;
  }
  return value;
}

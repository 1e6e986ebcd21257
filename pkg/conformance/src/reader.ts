#!/usr/bin/env node
// Independent reader for provent container files. Implemented from
// docs/format.md alone, sharing no code with the primary library, using
// only Node built-ins. Proves that the format is decodable anywhere.
//
//   node dist/reader.js info <file>
//   node dist/reader.js cat <file> <k>

import { readFileSync } from "node:fs";

import {
  EventJson,
  SchemaTable,
  TreePair,
  Units,
  canonicalJson,
  eventJsonFromTree,
  genericDecode,
  parseSchema,
} from "./schema";
import { WireType, readMessageFields } from "./wire";
import { ZipEntry, readDirectory, readEntry } from "./zip";

const SCHEMA_TEXT_FIELD = 5; // FileDescriptor.schema_text, the only bootstrap fact

export interface ContainerFile {
  entries: Map<string, ZipEntry>;
  data: Buffer;
  table: SchemaTable;
  descriptor: TreePair[];
  units: Units;
  eventCount: number;
}

function entryPayload(file: ContainerFile, name: string): Uint8Array {
  const entry = file.entries.get(name);
  if (entry === undefined) throw new Error(`archive has no '${name}' entry`);
  return readEntry(file.data, entry);
}

export function openContainer(path: string): ContainerFile {
  const data = readFileSync(path);
  const entries = readDirectory(data);
  const header = entries.get("header");
  if (header === undefined) throw new Error("archive has no 'header' entry");
  const headerBytes = readEntry(data, header);

  // bootstrap: pull the schema text out of the descriptor, then re-decode
  // the descriptor through the schema it carries
  let schemaText: string | null = null;
  for (const field of readMessageFields(headerBytes)) {
    if (field.fieldNumber === SCHEMA_TEXT_FIELD
        && field.wireType === WireType.LengthDelimited) {
      schemaText = Buffer.from(field.bytes!).toString("utf8");
    }
  }
  if (schemaText === null) throw new Error("descriptor carries no schema text");
  const table = parseSchema(schemaText);
  const descriptor = genericDecode(headerBytes, table, "FileDescriptor", null);

  const fields = new Map(descriptor);
  const version = fields.get("format_version");
  if (version !== 1n) throw new Error(`format version ${version}, this reader reads 1`);
  const scheme = new Map(fields.get("QuantizationScheme") as TreePair[]);
  const units: Units = {
    momentum: Number(scheme.get("momentum_unit") ?? 0n),
    length: Number(scheme.get("length_unit") ?? 0n),
  };
  if (units.momentum < 1 || units.length < 1) {
    throw new Error("descriptor has invalid quantization units");
  }

  let eventCount = 0;
  for (const name of entries.keys()) {
    if (/^\d+$/.test(name)) eventCount += 1;
  }
  return { entries, data, table, descriptor, units, eventCount };
}

export function decodeEventJson(file: ContainerFile, ordinal: number): EventJson {
  if (!Number.isInteger(ordinal) || ordinal < 0 || ordinal >= file.eventCount) {
    throw new Error(`event ${ordinal} outside 0..${file.eventCount - 1}`);
  }
  const tree = genericDecode(
    entryPayload(file, String(ordinal)), file.table, "EventRecord", file.units);
  return eventJsonFromTree(tree);
}

export function infoText(path: string): string {
  const file = openContainer(path);
  const fields = new Map(file.descriptor);
  const description = Buffer.from((fields.get("description") as Uint8Array) ?? []).toString("utf8");

  const mirror = Buffer.from(entryPayload(file, "promc_nevents.txt")).toString("ascii");
  if (mirror !== `${file.eventCount}\n`) {
    throw new Error(
      `promc_nevents.txt says ${JSON.stringify(mirror)}, directory has ${file.eventCount} events`);
  }
  const lines = [
    `file: ${path}`,
    `format version: 1`,
    `description: ${description}`,
    `momentum unit: ${file.units.momentum} per GeV`,
    `length unit: ${file.units.length} per mm`,
    `events: ${file.eventCount}`,
  ];
  return lines.join("\n") + "\n";
}

export function main(argv: string[]): number {
  const [command, path, ordinalText] = argv;
  try {
    if (command === "info" && path !== undefined) {
      process.stdout.write(infoText(path));
      return 0;
    }
    if (command === "cat" && path !== undefined && ordinalText !== undefined) {
      const file = openContainer(path);
      const event = decodeEventJson(file, Number(ordinalText));
      process.stdout.write(canonicalJson(event) + "\n");
      return 0;
    }
  } catch (error) {
    process.stderr.write(`reader: ${(error as Error).message}\n`);
    return 1;
  }
  process.stderr.write("usage: reader.js info <file> | cat <file> <k>\n");
  return 2;
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}

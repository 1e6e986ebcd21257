// Minimal ZIP reading for STORED-only archives, per docs/format.md section 4.

export interface ZipEntry {
  name: string;
  localOffset: number;
  size: number;
  crc32: number;
}

const LOCAL_SIG = 0x04034b50;
const CENTRAL_SIG = 0x02014b50;
const EOCD_SIG = 0x06054b50;
const EOCD_MIN = 22;

const CRC_TABLE = new Uint32Array(256);
for (let n = 0; n < 256; n++) {
  let c = n;
  for (let k = 0; k < 8; k++) {
    c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
  }
  CRC_TABLE[n] = c >>> 0;
}

export function crc32(data: Uint8Array): number {
  let c = 0xffffffff;
  for (let i = 0; i < data.length; i++) {
    c = CRC_TABLE[(c ^ data[i]) & 0xff] ^ (c >>> 8);
  }
  return (c ^ 0xffffffff) >>> 0;
}

function findEocd(data: Buffer): number {
  const lowest = Math.max(0, data.length - EOCD_MIN - 0xffff);
  for (let pos = data.length - EOCD_MIN; pos >= lowest; pos--) {
    if (data.readUInt32LE(pos) !== EOCD_SIG) continue;
    const commentLen = data.readUInt16LE(pos + 20);
    if (pos + EOCD_MIN + commentLen === data.length) return pos;
  }
  throw new Error("no end-of-central-directory record found");
}

export function readDirectory(data: Buffer): Map<string, ZipEntry> {
  if (data.length < EOCD_MIN) {
    throw new Error(`${data.length} bytes is too small for an archive`);
  }
  const eocd = findEocd(data);
  const disk = data.readUInt16LE(eocd + 4);
  const cdDisk = data.readUInt16LE(eocd + 6);
  if (disk !== 0 || cdDisk !== 0) throw new Error("multi-disk archives unsupported");
  const total = data.readUInt16LE(eocd + 10);
  const cdSize = data.readUInt32LE(eocd + 12);
  const cdOffset = data.readUInt32LE(eocd + 16);
  if (cdOffset + cdSize > data.length) {
    throw new Error("central directory extends past end of file");
  }
  const entries = new Map<string, ZipEntry>();
  let pos = cdOffset;
  for (let i = 0; i < total; i++) {
    if (data.readUInt32LE(pos) !== CENTRAL_SIG) {
      throw new Error(`bad central-directory signature at ${pos}`);
    }
    const method = data.readUInt16LE(pos + 10);
    const crc = data.readUInt32LE(pos + 16);
    const compressedSize = data.readUInt32LE(pos + 20);
    const size = data.readUInt32LE(pos + 24);
    const nameLen = data.readUInt16LE(pos + 28);
    const extraLen = data.readUInt16LE(pos + 30);
    const commentLen = data.readUInt16LE(pos + 32);
    const localOffset = data.readUInt32LE(pos + 42);
    const name = data.toString("utf8", pos + 46, pos + 46 + nameLen);
    if (method !== 0) throw new Error(`entry ${name} is compressed (method ${method})`);
    if (compressedSize !== size) throw new Error(`entry ${name} sizes disagree`);
    entries.set(name, { name, localOffset, size, crc32: crc });
    pos += 46 + nameLen + extraLen + commentLen;
  }
  return entries;
}

export function readEntry(data: Buffer, entry: ZipEntry): Uint8Array {
  const pos = entry.localOffset;
  if (data.readUInt32LE(pos) !== LOCAL_SIG) {
    throw new Error(`bad local-header signature for entry ${entry.name}`);
  }
  const nameLen = data.readUInt16LE(pos + 26);
  const extraLen = data.readUInt16LE(pos + 28);
  const start = pos + 30 + nameLen + extraLen;
  if (start + entry.size > data.length) {
    throw new Error(`entry ${entry.name} payload truncated`);
  }
  const payload = data.subarray(start, start + entry.size);
  if (crc32(payload) !== entry.crc32) {
    throw new Error(`crc mismatch entry '${entry.name}'`);
  }
  return payload;
}

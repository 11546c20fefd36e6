import { MatrixPayload, SignalPayload } from "./types.js";

/** Readers/writers for the chanadapt file formats, used to exchange data
 * with the CLI without going through the service. */

const EEGB_MAGIC = "EEGB";

/** Parse an EEGB binary signal file (f32 samples widen to f64 exactly). */
export function parseEegb(raw: Buffer): SignalPayload {
  if (raw.length < 22 || raw.toString("latin1", 0, 4) !== EEGB_MAGIC) {
    throw new Error("not an EEGB file");
  }
  let off = 4;
  const version = raw.readUInt16LE(off);
  off += 2;
  if (version !== 1) throw new Error(`unsupported EEGB version ${version}`);
  const nChannels = raw.readUInt32LE(off);
  off += 4;
  const nSamples = raw.readUInt32LE(off);
  off += 4;
  const sfreq = raw.readDoubleLE(off);
  off += 8;
  const labels: string[] = [];
  for (let c = 0; c < nChannels; c += 1) {
    const len = raw.readUInt16LE(off);
    off += 2;
    labels.push(raw.toString("utf-8", off, off + len));
    off += len;
  }
  if (raw.length !== off + 4 * nChannels * nSamples) {
    throw new Error("truncated EEGB file");
  }
  const data: number[][] = [];
  for (let c = 0; c < nChannels; c += 1) {
    const row = new Array<number>(nSamples);
    for (let t = 0; t < nSamples; t += 1) {
      row[t] = raw.readFloatLE(off);
      off += 4;
    }
    data.push(row);
  }
  return { data, sfreq, labels };
}

/** Serialize a signal to the CSV format the CLI accepts (lossless floats). */
export function signalToCsv(signal: SignalPayload): string {
  const header = ["label", ...signal.data[0].map((_, i) => `s${i}`)].join(",");
  const rows = signal.labels.map(
    (label, c) => [label, ...signal.data[c].map(numberToString)].join(","),
  );
  return `# sfreq: ${numberToString(signal.sfreq)}\n${header}\n${rows.join("\n")}\n`;
}

/** Parse a signal CSV produced by the CLI. */
export function parseSignalCsv(text: string): SignalPayload {
  let sfreq: number | null = null;
  const labels: string[] = [];
  const data: number[][] = [];
  let headerSeen = false;
  for (const rawLine of text.split("\n")) {
    const line = rawLine.trim();
    if (!line) continue;
    if (line.startsWith("#")) {
      const body = line.slice(1).trim();
      if (body.startsWith("sfreq:")) sfreq = Number(body.slice(6));
      continue;
    }
    if (!headerSeen) {
      headerSeen = true;
      continue;
    }
    const fields = line.split(",");
    labels.push(fields[0]);
    data.push(fields.slice(1).map(Number));
  }
  if (!headerSeen || sfreq === null) throw new Error("malformed signal CSV");
  return { data, sfreq, labels };
}

/** Parse a matrix CSV written by `adapt --format csv matrix ...`. */
export function parseMatrixCsv(text: string): MatrixPayload {
  let method = "";
  let sourceLabels: string[] = [];
  let target: string[] = [];
  const metadata: Record<string, string> = {};
  let bias: number[] | null = null;
  const matrix: number[][] = [];
  for (const rawLine of text.split("\n")) {
    const line = rawLine.trim();
    if (!line) continue;
    if (line.startsWith("#")) {
      const body = line.slice(1).trim();
      if (body.startsWith("method:")) method = body.slice(7).trim();
      else if (body.startsWith("source_labels:")) sourceLabels = body.slice(14).split(",").map((s) => s.trim());
      else if (body.startsWith("target:")) target = body.slice(7).split(",").map((s) => s.trim());
      else if (body.startsWith("bias:")) bias = body.slice(5).split(",").map(Number);
      else if (body.startsWith("meta ")) {
        const eq = body.indexOf("=");
        if (eq > 5) metadata[body.slice(5, eq).trim()] = body.slice(eq + 1).trim();
      }
      continue;
    }
    matrix.push(line.split(",").map(Number));
  }
  if (!method || matrix.length === 0) throw new Error("malformed matrix CSV");
  return { matrix, method, source_labels: sourceLabels, target, metadata, bias };
}

/** Shortest round-trip decimal, matching Python's repr for float64. */
export function numberToString(x: number): string {
  if (Number.isInteger(x) && Math.abs(x) < 1e16) return `${x}.0`;
  return String(x);
}

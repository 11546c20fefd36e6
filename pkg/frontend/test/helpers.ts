import { ChildProcess, execFileSync, spawn, spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

/** Spawns the chanadapt service and resolves once /health answers. */
export async function startServer(port: number): Promise<ChildProcess> {
  const proc = spawn(
    "python3",
    ["-m", "uvicorn", "chanadapt.service:app", "--host", "127.0.0.1", "--port", String(port), "--log-level", "warning"],
    { stdio: ["ignore", "inherit", "inherit"] },
  );
  const deadline = Date.now() + 30_000;
  for (;;) {
    if (proc.exitCode !== null) throw new Error(`server exited with ${proc.exitCode}`);
    try {
      const resp = await fetch(`http://127.0.0.1:${port}/health`);
      if (resp.ok) return proc;
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) {
      proc.kill();
      throw new Error("server did not become healthy in 30s");
    }
    await new Promise((r) => setTimeout(r, 150));
  }
}

export function stopServer(proc: ChildProcess): Promise<void> {
  return new Promise((resolve) => {
    proc.once("exit", () => resolve());
    proc.kill("SIGTERM");
    setTimeout(() => {
      if (proc.exitCode === null) proc.kill("SIGKILL");
    }, 3000).unref();
  });
}

export interface Workspace {
  dir: string;
  path(name: string): string;
  write(name: string, content: string): string;
  read(name: string): string;
  readBytes(name: string): Buffer;
  cleanup(): void;
}

export function makeWorkspace(): Workspace {
  const dir = mkdtempSync(join(tmpdir(), "chanadapt-client-"));
  return {
    dir,
    path: (name) => join(dir, name),
    write(name, content) {
      const p = join(dir, name);
      writeFileSync(p, content);
      return p;
    },
    read: (name) => readFileSync(join(dir, name), "utf-8"),
    readBytes: (name) => readFileSync(join(dir, name)),
    cleanup: () => rmSync(dir, { recursive: true, force: true }),
  };
}

/** Runs the adapt CLI, throwing on nonzero exit. Returns stdout. */
export function adapt(...args: string[]): string {
  return execFileSync("adapt", args, { encoding: "utf-8" });
}

/** Runs the adapt CLI expecting failure; returns { status, stderr }. */
export function adaptExpectFail(...args: string[]): { status: number; stderr: string } {
  const out = spawnSync("adapt", args, { encoding: "utf-8" });
  if (out.status === 0) throw new Error("CLI unexpectedly succeeded");
  return { status: out.status ?? -1, stderr: out.stderr };
}

/** Deterministic 32-bit PRNG; good enough to build shared test fixtures. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function randomMatrix(rand: () => number, rows: number, cols: number): number[][] {
  return Array.from({ length: rows }, () =>
    Array.from({ length: cols }, () => 2.0 * rand() - 1.0),
  );
}

export function maxAbsDiff(a: number[][], b: number[][]): number {
  if (a.length !== b.length) throw new Error(`row count ${a.length} != ${b.length}`);
  let worst = 0;
  for (let i = 0; i < a.length; i += 1) {
    if (a[i].length !== b[i].length) throw new Error(`col count differs in row ${i}`);
    for (let j = 0; j < a[i].length; j += 1) {
      worst = Math.max(worst, Math.abs(a[i][j] - b[i][j]));
    }
  }
  return worst;
}

/** Wire types mirrored from the service's pydantic schemas. */

/** A builtin montage by name, or explicit labels + unit-sphere positions. */
export type MontageRef =
  | { name: string }
  | { labels: string[]; positions: number[][] };

export interface MatrixPayload {
  matrix: number[][];
  method: string;
  source_labels: string[];
  target: string[];
  metadata: Record<string, string>;
  bias: number[] | null;
}

export interface SignalPayload {
  data: number[][];
  sfreq: number;
  labels: string[];
}

export interface EpochSetPayload {
  epochs: number[][][];
  sfreq: number;
  labels: string[];
  subject_ids: string[];
  class_labels?: number[] | null;
}

export interface SplineConfig {
  stiffness?: number;
  n_terms?: number;
  reg_lambda?: number;
}

export interface HarmonicConfig {
  l_max?: number;
  mode?: "evaluate" | "least_squares";
  ridge?: number;
}

export interface RiemannianConfig {
  shrinkage?: "auto" | number;
  mean_tol?: number;
  mean_max_iter?: number;
}

export interface LsqOptions {
  ridge?: number;
  withBias?: boolean;
  sourceLabels?: string[];
  targetLabels?: string[];
}

export type NormalizeMode = "minmax" | "zscore" | "uv_scale";

export interface MontageInfo {
  name: string;
  labels: string[];
  positions: number[][];
}

/** Raised when the service reports a domain error; mirrors the server's
 * exception class name and exact message. */
export class ServiceError extends Error {
  readonly kind: string;
  readonly status: number;

  constructor(kind: string, message: string, status: number) {
    super(message);
    this.name = "ServiceError";
    this.kind = kind;
    this.status = status;
  }
}

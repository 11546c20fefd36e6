import {
  EpochSetPayload,
  HarmonicConfig,
  LsqOptions,
  MatrixPayload,
  MontageInfo,
  MontageRef,
  NormalizeMode,
  RiemannianConfig,
  ServiceError,
  SignalPayload,
  SplineConfig,
} from "./types.js";

/** Thin array-in/array-out client of the chanadapt HTTP service.
 *
 * Every method is a single request; all numerics stay on the server, so
 * results are identical to the primary implementation's. JSON carries
 * float64 exactly (shortest round-trip decimal on both sides).
 */
export class ChanAdaptClient {
  constructor(readonly baseUrl: string, private readonly fetchImpl = fetch) {}

  private async request<T>(method: "GET" | "POST", path: string, body?: unknown): Promise<T> {
    const resp = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await resp.text();
    if (!resp.ok) {
      let kind = "HTTPError";
      let message = text;
      try {
        const parsed = JSON.parse(text);
        if (typeof parsed.error === "string") {
          message = parsed.error;
          kind = parsed.kind ?? kind;
        } else if (parsed.detail !== undefined) {
          message = JSON.stringify(parsed.detail);
          kind = "ValidationError";
        }
      } catch {
        // non-JSON body: report it verbatim
      }
      throw new ServiceError(kind, message, resp.status);
    }
    return JSON.parse(text) as T;
  }

  async health(): Promise<{ status: string; version: string }> {
    return this.request("GET", "/health");
  }

  async montages(): Promise<{ names: string[]; n_channels: number[] }> {
    return this.request("GET", "/montages");
  }

  async montage(name: string): Promise<MontageInfo> {
    return this.request("GET", `/montages/${encodeURIComponent(name)}`);
  }

  /** Spherical-spline interpolation matrix (C_t x C_s) from geometry. */
  async ssiMatrix(source: MontageRef, target: MontageRef, config?: SplineConfig): Promise<MatrixPayload> {
    return this.request("POST", "/matrices/ssi", { source, target, ...(config ? { config } : {}) });
  }

  /** Spherical-harmonic projection matrix ((l_max+1)^2 x C_s). */
  async harmonicMatrix(source: MontageRef, config?: HarmonicConfig): Promise<MatrixPayload> {
    return this.request("POST", "/matrices/harmonic", { source, ...(config ? { config } : {}) });
  }

  /** Closed-form least-squares projection fitting target = W source (+ b). */
  async lsqFit(sourceData: number[][], targetData: number[][], options: LsqOptions = {}): Promise<MatrixPayload> {
    return this.request("POST", "/matrices/lsq", {
      source_data: sourceData,
      target_data: targetData,
      ridge: options.ridge ?? 0.0,
      with_bias: options.withBias ?? true,
      source_labels: options.sourceLabels ?? null,
      target_labels: options.targetLabels ?? null,
    });
  }

  /** Per-subject Riemannian re-centering over an optional base matrix. */
  async riemannianFit(epochs: EpochSetPayload, base?: MatrixPayload, config?: RiemannianConfig): Promise<MatrixPayload> {
    return this.request("POST", "/matrices/riemannian", {
      epochs,
      base: base ?? null,
      ...(config ? { config } : {}),
    });
  }

  /** Label-matching zero-pad identity baseline. */
  async identityMatrix(sourceLabels: string[], targetLabels?: string[]): Promise<MatrixPayload> {
    return this.request("POST", "/matrices/identity", {
      source_labels: sourceLabels,
      target_labels: targetLabels ?? null,
    });
  }

  /** X_t = M X_s with label matching and automatic channel reordering. */
  async apply(matrix: MatrixPayload, signal: SignalPayload): Promise<SignalPayload> {
    return this.request("POST", "/signals/apply", { matrix, signal });
  }

  /** Polyphase windowed-sinc resampling to a new rate. */
  async resample(signal: SignalPayload, sfreq: number): Promise<SignalPayload> {
    return this.request("POST", "/signals/resample", { signal, sfreq });
  }

  /** Per-channel min-max / z-score / divide-by-100 normalization. */
  async normalize(signal: SignalPayload, mode: NormalizeMode): Promise<SignalPayload> {
    return this.request("POST", "/signals/normalize", { signal, mode });
  }
}

export function makeClient(baseUrl: string): ChanAdaptClient {
  return new ChanAdaptClient(baseUrl.replace(/\/+$/, ""));
}

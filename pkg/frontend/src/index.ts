export { ChanAdaptClient, makeClient } from "./client.js";
export {
  parseEegb,
  parseMatrixCsv,
  parseSignalCsv,
  signalToCsv,
  numberToString,
} from "./formats.js";
export type {
  EpochSetPayload,
  HarmonicConfig,
  LsqOptions,
  MatrixPayload,
  MontageInfo,
  MontageRef,
  NormalizeMode,
  RiemannianConfig,
  SignalPayload,
  SplineConfig,
} from "./types.js";
export { ServiceError } from "./types.js";

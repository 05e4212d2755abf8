/** Wire types for the nextmark session service (JSON payload shapes). */

/** One visual element: id, position in data units, color class in 1..K. */
export interface MarkDoc {
  id: number;
  x: number;
  y: number;
  color: number;
}

/** Mark-space document as served by GET /sessions/{id}/space. */
export interface SpaceDoc {
  width: number;
  height: number;
  color_count: number;
  marks: MarkDoc[];
}

export interface PredictionEntry {
  mark_id: number;
  score: number;
}

/** Response of POST /sessions/{id}/clicks and GET /sessions/{id}/prediction. */
export interface PredictionPayload {
  t: number;
  status: "warmup" | "ok";
  prediction: PredictionEntry[];
  /** Whether the previous prediction contained this click; null before the
   *  first prediction. Only present on click responses. */
  prev_hit?: boolean | null;
}

export interface ParticlePoint {
  x: number;
  y: number;
  k: number;
}

/** Downsampled posterior snapshot from GET /sessions/{id}/particles. */
export interface ParticlesPayload {
  t: number;
  n_particles: number;
  points: ParticlePoint[];
  /** Fraction of particles per bias bin, 10 bins over [0, 1]. */
  pi_hist: number[];
}

/** Response of POST /sessions. */
export interface SessionInfo {
  id: string;
  t: number;
  n_marks: number;
  color_count: number;
  warmup: number;
  alpha: number;
}

export interface CreateSessionRequest {
  space?: SpaceDoc;
  dataset?: { n_marks?: number; color_count?: number; seed?: number };
  params?: {
    particles?: number;
    alpha?: number;
    sigma_x?: number;
    sigma_y?: number;
    sigma_pi?: number;
    rho?: number;
    warmup?: number;
    seed?: number;
    resampling?: "multinomial" | "systematic";
  };
}

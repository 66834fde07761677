export interface ClassifyResponse {
  digit: number;
  probabilities: number[];
  bangla_text: string;
}

export interface StagedImage {
  /** netpbm (P5/P6) bytes, ready for POST /api/classify */
  bytes: Uint8Array;
  /** data: or blob: URL for the on-screen preview */
  previewUrl: string;
  name: string;
}

/** Bangla numeral glyphs, indexed by digit. */
export const BANGLA_NUMERALS = ["০", "১", "২", "৩", "৪", "৫", "৬", "৭", "৮", "৯"];

export function argmax(values: number[]): number {
  let best = 0;
  for (let i = 1; i < values.length; i++) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

/** UI state machine.
 *
 * Phases: idle -> captured -> classifying -> (result | error); error ->
 * captured on retry.  Staging a new image from captured/result/error
 * replaces the previous one; nothing is accepted while a request is in
 * flight.
 */

import { ClassifyResponse, StagedImage } from "./types.js";

export type UiState =
  | { phase: "idle" }
  | { phase: "captured"; image: StagedImage }
  | { phase: "classifying"; image: StagedImage }
  | { phase: "result"; image: StagedImage; response: ClassifyResponse; audioUrl: string | null }
  | { phase: "error"; message: string; image: StagedImage | null };

export type UiEvent =
  | { kind: "stage"; image: StagedImage }
  | { kind: "stage-failed"; message: string }
  | { kind: "submit" }
  | { kind: "resolved"; response: ClassifyResponse; audioUrl: string | null }
  | { kind: "failed"; message: string }
  | { kind: "retry" };

export const INITIAL: UiState = { phase: "idle" };

export function reduce(state: UiState, event: UiEvent): UiState {
  switch (event.kind) {
    case "stage":
      if (state.phase === "classifying") return state; // one request at a time
      return { phase: "captured", image: event.image };
    case "stage-failed":
      if (state.phase === "classifying") return state;
      return { phase: "error", message: event.message, image: imageOf(state) };
    case "submit":
      if (state.phase === "captured" || state.phase === "result") {
        return { phase: "classifying", image: state.image };
      }
      return state;
    case "resolved":
      if (state.phase !== "classifying") return state;
      return {
        phase: "result",
        image: state.image,
        response: event.response,
        audioUrl: event.audioUrl,
      };
    case "failed":
      if (state.phase !== "classifying") return state;
      return { phase: "error", message: event.message, image: state.image };
    case "retry":
      if (state.phase !== "error") return state;
      return state.image ? { phase: "captured", image: state.image } : { phase: "idle" };
  }
}

export function imageOf(state: UiState): StagedImage | null {
  return "image" in state ? state.image : null;
}

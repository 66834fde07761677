/** Orchestrates staging, the classify+speak round trip, and audio playback.
 *
 * Everything side-effectful is injected (transport, audio, object URLs), so
 * the full request lifecycle is testable without a browser.
 */

import { ApiClient, ApiError } from "./api.js";
import { INITIAL, UiEvent, UiState, reduce } from "./state.js";
import { StagedImage } from "./types.js";

export interface AudioHandle {
  play(): void;
  stop(): void;
}

export interface ControllerDeps {
  api: ApiClient;
  /** Wrap speech bytes into something playable; blob URL + element in the browser. */
  makeAudio(bytes: ArrayBuffer): { url: string; handle: AudioHandle };
  onChange(state: UiState, muted: boolean): void;
}

export class Controller {
  state: UiState = INITIAL;
  muted = false;
  private audio: AudioHandle | null = null;
  private inFlight: Promise<void> | null = null;

  constructor(private deps: ControllerDeps) {}

  /** Emit the initial state so the host can paint the first frame. */
  start() {
    this.deps.onChange(this.state, this.muted);
  }

  private dispatch(event: UiEvent) {
    this.state = reduce(this.state, event);
    this.deps.onChange(this.state, this.muted);
  }

  stage(image: StagedImage) {
    this.stopAudio();
    this.dispatch({ kind: "stage", image });
  }

  stageFailed(message: string) {
    this.dispatch({ kind: "stage-failed", message });
  }

  retry() {
    this.dispatch({ kind: "retry" });
  }

  toggleMute() {
    this.muted = !this.muted;
    if (this.muted) this.stopAudio();
    this.deps.onChange(this.state, this.muted);
  }

  /** Kick off classify + speak for the staged image; no-op while in flight. */
  submit(): Promise<void> {
    if (this.state.phase !== "captured" && this.state.phase !== "result") {
      return this.inFlight ?? Promise.resolve();
    }
    const image = this.state.image;
    this.stopAudio();
    this.dispatch({ kind: "submit" });
    this.inFlight = this.run(image).finally(() => {
      this.inFlight = null;
    });
    return this.inFlight;
  }

  private async run(image: StagedImage): Promise<void> {
    try {
      const response = await this.deps.api.classify(image.bytes, image.name);
      let audioUrl: string | null = null;
      try {
        const bytes = await this.deps.api.speak(response.digit);
        const { url, handle } = this.deps.makeAudio(bytes);
        audioUrl = url;
        this.audio = handle;
      } catch {
        audioUrl = null; // classification still renders; audio is best-effort
      }
      this.dispatch({ kind: "resolved", response, audioUrl });
      if (this.audio && !this.muted) this.audio.play();
    } catch (err) {
      const message = err instanceof ApiError ? err.message : `service unreachable: ${err}`;
      this.dispatch({ kind: "failed", message });
    }
  }

  private stopAudio() {
    if (this.audio) {
      this.audio.stop();
      this.audio = null;
    }
  }
}

"use strict";
/** Orchestrates staging, the classify+speak round trip, and audio playback.
 *
 * Everything side-effectful is injected (transport, audio, object URLs), so
 * the full request lifecycle is testable without a browser.
 */
Object.defineProperty(exports, "__esModule", { value: true });
exports.Controller = void 0;
const api_js_1 = require("./api.js");
const state_js_1 = require("./state.js");
class Controller {
    constructor(deps) {
        this.deps = deps;
        this.state = state_js_1.INITIAL;
        this.muted = false;
        this.audio = null;
        this.inFlight = null;
    }
    /** Emit the initial state so the host can paint the first frame. */
    start() {
        this.deps.onChange(this.state, this.muted);
    }
    dispatch(event) {
        this.state = (0, state_js_1.reduce)(this.state, event);
        this.deps.onChange(this.state, this.muted);
    }
    stage(image) {
        this.stopAudio();
        this.dispatch({ kind: "stage", image });
    }
    stageFailed(message) {
        this.dispatch({ kind: "stage-failed", message });
    }
    retry() {
        this.dispatch({ kind: "retry" });
    }
    toggleMute() {
        this.muted = !this.muted;
        if (this.muted)
            this.stopAudio();
        this.deps.onChange(this.state, this.muted);
    }
    /** Kick off classify + speak for the staged image; no-op while in flight. */
    submit() {
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
    async run(image) {
        try {
            const response = await this.deps.api.classify(image.bytes, image.name);
            let audioUrl = null;
            try {
                const bytes = await this.deps.api.speak(response.digit);
                const { url, handle } = this.deps.makeAudio(bytes);
                audioUrl = url;
                this.audio = handle;
            }
            catch {
                audioUrl = null; // classification still renders; audio is best-effort
            }
            this.dispatch({ kind: "resolved", response, audioUrl });
            if (this.audio && !this.muted)
                this.audio.play();
        }
        catch (err) {
            const message = err instanceof api_js_1.ApiError ? err.message : `service unreachable: ${err}`;
            this.dispatch({ kind: "failed", message });
        }
    }
    stopAudio() {
        if (this.audio) {
            this.audio.stop();
            this.audio = null;
        }
    }
}
exports.Controller = Controller;

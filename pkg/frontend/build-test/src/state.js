"use strict";
/** UI state machine.
 *
 * Phases: idle -> captured -> classifying -> (result | error); error ->
 * captured on retry.  Staging a new image from captured/result/error
 * replaces the previous one; nothing is accepted while a request is in
 * flight.
 */
Object.defineProperty(exports, "__esModule", { value: true });
exports.INITIAL = void 0;
exports.reduce = reduce;
exports.imageOf = imageOf;
exports.INITIAL = { phase: "idle" };
function reduce(state, event) {
    switch (event.kind) {
        case "stage":
            if (state.phase === "classifying")
                return state; // one request at a time
            return { phase: "captured", image: event.image };
        case "stage-failed":
            if (state.phase === "classifying")
                return state;
            return { phase: "error", message: event.message, image: imageOf(state) };
        case "submit":
            if (state.phase === "captured" || state.phase === "result") {
                return { phase: "classifying", image: state.image };
            }
            return state;
        case "resolved":
            if (state.phase !== "classifying")
                return state;
            return {
                phase: "result",
                image: state.image,
                response: event.response,
                audioUrl: event.audioUrl,
            };
        case "failed":
            if (state.phase !== "classifying")
                return state;
            return { phase: "error", message: event.message, image: state.image };
        case "retry":
            if (state.phase !== "error")
                return state;
            return state.image ? { phase: "captured", image: state.image } : { phase: "idle" };
    }
}
function imageOf(state) {
    return "image" in state ? state.image : null;
}

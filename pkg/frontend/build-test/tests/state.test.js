"use strict";
var __importDefault = (this && this.__importDefault) || function (mod) {
    return (mod && mod.__esModule) ? mod : { "default": mod };
};
Object.defineProperty(exports, "__esModule", { value: true });
const strict_1 = __importDefault(require("node:assert/strict"));
const node_test_1 = require("node:test");
const state_js_1 = require("../src/state.js");
const image = (name = "a.pgm") => ({
    bytes: new Uint8Array([1, 2, 3]),
    previewUrl: `data:${name}`,
    name,
});
const response = {
    digit: 5,
    probabilities: [0, 0, 0, 0, 0, 0.9, 0.1, 0, 0, 0],
    bangla_text: "পাঁচ",
};
(0, node_test_1.test)("happy path walks idle -> captured -> classifying -> result", () => {
    let s = state_js_1.INITIAL;
    s = (0, state_js_1.reduce)(s, { kind: "stage", image: image() });
    strict_1.default.equal(s.phase, "captured");
    s = (0, state_js_1.reduce)(s, { kind: "submit" });
    strict_1.default.equal(s.phase, "classifying");
    s = (0, state_js_1.reduce)(s, { kind: "resolved", response, audioUrl: "blob:x" });
    strict_1.default.equal(s.phase, "result");
    strict_1.default.equal(s.phase === "result" && s.response.digit, 5);
});
(0, node_test_1.test)("failure lands in error and retry returns to captured", () => {
    let s = (0, state_js_1.reduce)(state_js_1.INITIAL, { kind: "stage", image: image() });
    s = (0, state_js_1.reduce)(s, { kind: "submit" });
    s = (0, state_js_1.reduce)(s, { kind: "failed", message: "boom" });
    strict_1.default.equal(s.phase, "error");
    s = (0, state_js_1.reduce)(s, { kind: "retry" });
    strict_1.default.equal(s.phase, "captured");
});
(0, node_test_1.test)("retry without a staged image goes back to idle", () => {
    let s = (0, state_js_1.reduce)(state_js_1.INITIAL, { kind: "stage-failed", message: "camera denied" });
    strict_1.default.equal(s.phase, "error");
    s = (0, state_js_1.reduce)(s, { kind: "retry" });
    strict_1.default.equal(s.phase, "idle");
});
(0, node_test_1.test)("classifying blocks re-staging and double submission", () => {
    let s = (0, state_js_1.reduce)(state_js_1.INITIAL, { kind: "stage", image: image("first.pgm") });
    s = (0, state_js_1.reduce)(s, { kind: "submit" });
    const blocked = (0, state_js_1.reduce)(s, { kind: "stage", image: image("second.pgm") });
    strict_1.default.equal(blocked, s);
    strict_1.default.equal((0, state_js_1.reduce)(s, { kind: "submit" }), s);
});
(0, node_test_1.test)("a second upload replaces the staged image", () => {
    let s = (0, state_js_1.reduce)(state_js_1.INITIAL, { kind: "stage", image: image("first.pgm") });
    s = (0, state_js_1.reduce)(s, { kind: "stage", image: image("second.pgm") });
    strict_1.default.equal(s.phase === "captured" && s.image.name, "second.pgm");
});
(0, node_test_1.test)("submitting again from result starts a new request", () => {
    let s = (0, state_js_1.reduce)(state_js_1.INITIAL, { kind: "stage", image: image() });
    s = (0, state_js_1.reduce)(s, { kind: "submit" });
    s = (0, state_js_1.reduce)(s, { kind: "resolved", response, audioUrl: null });
    s = (0, state_js_1.reduce)(s, { kind: "submit" });
    strict_1.default.equal(s.phase, "classifying");
});
(0, node_test_1.test)("stray events do not disturb unrelated phases", () => {
    strict_1.default.equal((0, state_js_1.reduce)(state_js_1.INITIAL, { kind: "submit" }), state_js_1.INITIAL);
    strict_1.default.equal((0, state_js_1.reduce)(state_js_1.INITIAL, { kind: "retry" }), state_js_1.INITIAL);
    strict_1.default.equal((0, state_js_1.reduce)(state_js_1.INITIAL, { kind: "resolved", response, audioUrl: null }), state_js_1.INITIAL);
});

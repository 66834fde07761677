/** Pure view: UiState -> a plain node tree the DOM layer materializes.
 *
 * Tests assert on this tree directly, so everything user-visible (digit,
 * Bangla word and numeral, bar heights, error text, audio source) must be
 * derivable from it.
 */

import { UiState } from "./state.js";
import { BANGLA_NUMERALS, argmax } from "./types.js";

export interface VNode {
  tag: string;
  attrs: Record<string, string>;
  on?: Record<string, string>; // event -> action name, wired by the DOM layer
  children: (VNode | string)[];
}

export function h(
  tag: string,
  attrs: Record<string, string> = {},
  children: (VNode | string)[] = [],
  on?: Record<string, string>,
): VNode {
  return { tag, attrs, children, ...(on ? { on } : {}) };
}

export interface ViewOptions {
  muted: boolean;
}

export function render(state: UiState, opts: ViewOptions): VNode {
  return h("main", { class: `app phase-${state.phase}` }, [
    h("h1", {}, ["Sign digit to Bangla speech"]),
    controls(state),
    body(state, opts),
  ]);
}

function controls(state: UiState): VNode {
  const busy = state.phase === "classifying";
  const fileAttrs: Record<string, string> = { type: "file", accept: "image/*,.pgm,.ppm", id: "file-input" };
  if (busy) fileAttrs.disabled = "disabled";
  const canSubmit = state.phase === "captured" || state.phase === "result";
  const submitAttrs: Record<string, string> = { id: "submit" };
  if (!canSubmit) submitAttrs.disabled = "disabled";
  const cameraAttrs: Record<string, string> = { id: "camera" };
  if (busy) cameraAttrs.disabled = "disabled";
  return h("section", { class: "controls" }, [
    h("input", fileAttrs, [], { change: "file-selected" }),
    h("button", cameraAttrs, ["Use camera"], { click: "capture" }),
    h("button", submitAttrs, [busy ? "Classifying…" : "Classify & speak"], { click: "submit" }),
    h("button", { id: "mute" }, ["Toggle sound"], { click: "toggle-mute" }),
  ]);
}

function body(state: UiState, opts: ViewOptions): VNode {
  switch (state.phase) {
    case "idle":
      return h("section", { class: "hint" }, [
        "Upload a hand-sign photo or use the camera to get started.",
      ]);
    case "captured":
      return h("section", { class: "staged" }, [preview(state.image.previewUrl)]);
    case "classifying":
      return h("section", { class: "staged" }, [
        preview(state.image.previewUrl),
        h("p", { class: "busy" }, ["Asking the classifier…"]),
      ]);
    case "error":
      return h("section", { class: "error" }, [
        h("div", { class: "banner", role: "alert" }, [state.message]),
        h("button", { id: "retry" }, ["Try again"], { click: "retry" }),
      ]);
    case "result":
      return result(state, opts);
  }
}

function preview(url: string): VNode {
  return h("img", { class: "preview", src: url, alt: "staged hand sign" });
}

function result(
  state: Extract<UiState, { phase: "result" }>,
  opts: ViewOptions,
): VNode {
  const { response, audioUrl } = state;
  const digit = argmax(response.probabilities); // never trust a digit we would not render
  const children: (VNode | string)[] = [
    preview(state.image.previewUrl),
    h("div", { class: "verdict" }, [
      h("span", { class: "numeral" }, [BANGLA_NUMERALS[digit]]),
      " / ",
      h("span", { class: "word", lang: "bn" }, [response.bangla_text]),
      h("span", { class: "digit-latin" }, [` (digit ${digit})`]),
    ]),
    confidenceChart(response.probabilities, digit),
  ];
  if (audioUrl) {
    const audioAttrs: Record<string, string> = { src: audioUrl, controls: "controls", id: "speech" };
    if (!opts.muted) audioAttrs.autoplay = "autoplay";
    children.push(h("audio", audioAttrs));
  }
  return h("section", { class: "result" }, children);
}

function confidenceChart(probabilities: number[], highlight: number): VNode {
  const bars = probabilities.map((p, k) =>
    h("div", { class: "bar-slot" }, [
      h("div", {
        class: k === highlight ? "bar best" : "bar",
        style: `height:${(p * 100).toFixed(1)}%`,
        "data-class": String(k),
        "data-prob": p.toFixed(4),
      }),
      h("span", { class: "bar-label" }, [String(k)]),
    ]),
  );
  return h("div", { class: "chart", role: "img" }, bars);
}

export function findAll(node: VNode, pred: (n: VNode) => boolean, out: VNode[] = []): VNode[] {
  if (pred(node)) out.push(node);
  for (const child of node.children) {
    if (typeof child !== "string") findAll(child, pred, out);
  }
  return out;
}

export function textOf(node: VNode): string {
  return node.children.map((c) => (typeof c === "string" ? c : textOf(c))).join("");
}

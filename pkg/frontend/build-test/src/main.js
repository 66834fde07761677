"use strict";
Object.defineProperty(exports, "__esModule", { value: true });
const api_js_1 = require("./api.js");
const controller_js_1 = require("./controller.js");
const dom_js_1 = require("./dom.js");
const render_js_1 = require("./render.js");
const root = document.getElementById("app");
const api = new api_js_1.ApiClient((url, init) => fetch(url, init));
const controller = new controller_js_1.Controller({
    api,
    makeAudio: dom_js_1.browserAudioFactory,
    onChange(state, muted) {
        const tree = (0, render_js_1.render)(state, { muted });
        root.replaceChildren((0, dom_js_1.materialize)(tree, (action, event) => void (0, dom_js_1.handleAction)(controller, action, event)));
    },
});
controller.muted = localStorage.getItem("signdigit-muted") === "1";
const originalToggle = controller.toggleMute.bind(controller);
controller.toggleMute = () => {
    originalToggle();
    localStorage.setItem("signdigit-muted", controller.muted ? "1" : "0");
};
controller.start();

import { ApiClient } from "./api.js";
import { Controller } from "./controller.js";
import { browserAudioFactory, handleAction, materialize } from "./dom.js";
import { render } from "./render.js";

const root = document.getElementById("app")!;
const api = new ApiClient((url, init) => fetch(url, init as RequestInit));

const controller = new Controller({
  api,
  makeAudio: browserAudioFactory,
  onChange(state, muted) {
    const tree = render(state, { muted });
    root.replaceChildren(materialize(tree, (action, event) => void handleAction(controller, action, event)));
  },
});

controller.muted = localStorage.getItem("signdigit-muted") === "1";
const originalToggle = controller.toggleMute.bind(controller);
controller.toggleMute = () => {
  originalToggle();
  localStorage.setItem("signdigit-muted", controller.muted ? "1" : "0");
};

controller.start();

// Browser entry: pick the service URL and a root, then hand off to the app.

import { InspectorApp } from "./app.js";

const params = new URLSearchParams(window.location.search);
const apiBase = params.get("api") ?? "http://127.0.0.1:7044";

const toolbar = document.getElementById("toolbar")!;
const mount = document.getElementById("app")!;
const app = new InspectorApp(mount, apiBase);

const rootInput = document.getElementById("root-name") as HTMLInputElement;
const openButton = document.getElementById("open-session")!;
openButton.addEventListener("click", () => {
  void app.openSession(rootInput.value.trim());
});
rootInput.addEventListener("keydown", (event) => {
  if (event.key === "Enter") void app.openSession(rootInput.value.trim());
});

void app.loadPages();

toolbar.querySelectorAll("[data-root]").forEach((button) => {
  button.addEventListener("click", () => {
    rootInput.value = (button as HTMLElement).dataset.root!;
    void app.openSession(rootInput.value);
  });
});

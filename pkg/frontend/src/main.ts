import { boot } from "./app";
import "./style.css";

const root = document.getElementById("app");
if (root) {
  boot(root).catch((err) => {
    root.innerHTML = `<div class="boot-error">
      <h2>couldn't reach the render service</h2>
      <p>${err instanceof Error ? err.message : String(err)}</p>
      <p>start it with <code>genii serve</code>, or point the UI somewhere
      else with <code>?api=http://host:port</code>.</p>
    </div>`;
  });
}

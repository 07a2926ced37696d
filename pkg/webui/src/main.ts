import { ApiClient } from "./api.js";
import { App } from "./app.js";
import { loadConfig } from "./config.js";

const config = loadConfig();
const client = new ApiClient(config.apiBase, (url, init) => fetch(url, init));
const root = document.getElementById("app");
if (root) {
  const app = new App(root, client);
  void app.init();
}

import { ApiClient, apiBaseFromLocation } from "./api.js";
import { ConsoleStore } from "./store.js";
import { initUi } from "./ui.js";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app mount point");

const client = new ApiClient(apiBaseFromLocation(window.location));
const store = new ConsoleStore(client);
initUi(root, store, client);
void store.start();

window.addEventListener("beforeunload", () => store.stop());

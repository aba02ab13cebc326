import { ApiClient } from "./api.js";
import { SearchApp } from "./app.js";

const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app mount point");
}
new SearchApp(root, new ApiClient(""));

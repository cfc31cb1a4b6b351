import { ApiClient } from "./api";
import { Controller } from "./controller";

const root = document.getElementById("app");
if (root) {
  const baseUrl = root.dataset["baseUrl"] ?? "http://127.0.0.1:8000";
  new Controller(new ApiClient(baseUrl), root).init();
}

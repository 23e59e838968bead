/** Browser entry point. The API base URL comes from a meta tag, empty means same origin. */

import { ApiClient } from "./api.js";
import { initApp } from "./app.js";

const meta = document.querySelector<HTMLMetaElement>('meta[name="api-base"]');
initApp(document, new ApiClient(meta?.content ?? ""));

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const here = dirname(fileURLToPath(import.meta.url));

/** Load the real page markup into the jsdom document (scripts do not run). */
export function loadPage(): void {
  const html = readFileSync(join(here, "..", "public", "index.html"), "utf-8");
  const body = html.match(/<body>([\s\S]*)<\/body>/);
  if (!body) throw new Error("index.html has no body");
  document.body.innerHTML = body[1];
}

export function texts(selector: string): string[] {
  return Array.from(document.querySelectorAll(selector)).map(
    (node) => node.textContent ?? "",
  );
}

/** Shared bits for the plot scripts: arg handling and error-to-exit-code. */

import { pathToFileURL } from "node:url";

/** True when `moduleUrl` is the script node was asked to run. */
export function isMain(moduleUrl: string): boolean {
  const entry = process.argv[1];
  return entry !== undefined && moduleUrl === pathToFileURL(entry).href;
}

/** Run a CLI body; schema and usage problems become exit code 1. */
export function runCli(usage: string, body: () => void): number {
  try {
    body();
    return 0;
  } catch (err) {
    process.stderr.write(`error: ${err instanceof Error ? err.message : String(err)}\n`);
    process.stderr.write(usage + "\n");
    return 1;
  }
}

export function requireOut(values: { out?: string }): string {
  if (!values.out) throw new Error("--out <file> is required");
  return values.out;
}

export function matchLabels(labels: string[] | undefined, count: number): void {
  if (labels !== undefined && labels.length !== count) {
    throw new Error(`got ${labels.length} --label flags for ${count} inputs`);
  }
}

/** Asset validation CLI: prints findings, exits nonzero when any exist. */

import { DEFAULT_MANIFEST } from "./manifest.js";
import { validateAssets, validateForwardTargets, Finding } from "./validate.js";

function parseArgs(argv: string[]): { templates: string; config?: string } {
  let templates = "../templates";
  let config: string | undefined;
  for (let i = 0; i < argv.length; i++) {
    if (argv[i] === "--templates") templates = argv[++i];
    else if (argv[i] === "--config") config = argv[++i];
    else {
      console.error(`unknown argument: ${argv[i]}`);
      process.exit(2);
    }
  }
  return { templates, config };
}

function main(): void {
  const args = parseArgs(process.argv.slice(2));
  const findings: Finding[] = validateAssets(args.templates, DEFAULT_MANIFEST);
  if (args.config) {
    findings.push(...validateForwardTargets(args.templates, args.config));
  }
  for (const f of findings) {
    console.error(`${f.code} ${f.file}: ${f.message}`);
  }
  console.error(`${findings.length} findings`);
  process.exit(findings.length === 0 ? 0 : 1);
}

main();

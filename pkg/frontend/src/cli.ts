#!/usr/bin/env node
/** chainspectra-plots <recipe.json> [...more recipes]
 *
 * Renders each declarative figure recipe to its SVG output.  Exit
 * codes: 0 success, 1 schema mismatch or empty input (the message
 * names the offending column or file), 2 usage error. */

import { EmptyInputError, SchemaError, readRecipe, render } from "./recipes.js";

export function run(argv: string[]): number {
  if (argv.length === 0) {
    console.error("usage: chainspectra-plots <recipe.json> [...]");
    return 2;
  }
  for (const file of argv) {
    try {
      const out = render(readRecipe(file));
      console.log(`${file} -> ${out}`);
    } catch (err) {
      if (err instanceof SchemaError || err instanceof EmptyInputError) {
        console.error(`${file}: ${err.message}`);
        return 1;
      }
      if (err instanceof Error) {
        console.error(`${file}: ${err.message}`);
        return 2;
      }
      throw err;
    }
  }
  return 0;
}

if (import.meta.url === `file://${process.argv[1]}`) {
  process.exitCode = run(process.argv.slice(2));
}

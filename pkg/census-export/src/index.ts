export {
  censusTableText,
  ExportError,
  Gluing,
  TessellationEntry,
  tessellationText,
  validateEntry,
} from "./formats.js";
export { loadEntry, loadLspaceValues, sourceEntryPath } from "./source.js";
export { run } from "./cli.js";

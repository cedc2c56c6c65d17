/* tslint:disable */
/* eslint-disable */

/**
 * Coupling and cavity discrepancy (both syndrome values) along the
 * depolarizing line `p in (0, p_max]`, as a JSON array.
 */
export function cavity_curve(p_max: number, steps: number): string;

/**
 * Sample one error, decode it with the staged decoder and return JSON with
 * an SVG overlay (errors as dots, estimate as shaded edges, lit checks filled).
 */
export function decode_demo(d: number, noise: string, p: number, pattern: string, seed: bigint): string;

/**
 * SVG of the distance-`d` lattice after `s`-sparsification with `pattern`
 * (`dv`, `dh`, `cv`, `ch`). Removed qubits are dashed.
 */
export function render_lattice(d: number, pattern: string, s: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly cavity_curve: (a: number, b: number) => [number, number, number, number];
    readonly decode_demo: (a: number, b: number, c: number, d: number, e: number, f: number, g: bigint) => [number, number, number, number];
    readonly render_lattice: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;

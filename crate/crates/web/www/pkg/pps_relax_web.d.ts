/* tslint:disable */
/* eslint-disable */

export function concurrence(t_end: number, t_step: number, taus: Float64Array): Float64Array;

export function populations(state: string, normalization: string, t_end: number, t_step: number, taus: Float64Array): Float64Array;

export function suddenDeathTime(curve: Float64Array): number;

export function wigner(state: string, t: number, taus: Float64Array): Float64Array;

/**
 * Side of the Wigner grid shown by the page.
 */
export function wignerSide(): number;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly concurrence: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly populations: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number, number];
    readonly suddenDeathTime: (a: number, b: number) => number;
    readonly wigner: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly wignerSide: () => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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

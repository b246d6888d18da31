/* tslint:disable */
/* eslint-disable */

export class Compressed {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly rgba: Uint8Array;
    psnr: number;
    ratio: number;
    rel_error: number;
}

export function algorithm_names(): string[];

export function compress_image(rgba: Uint8Array, width: number, height: number, r1: number, r2: number, r3: number, algorithm: string, seed: bigint): Compressed;

export function hilbert_curves(n: number, max_rank: number, seed: bigint): Float64Array;

export function power_sweep(n: number, rank: number, gamma: number, max_q: number, seed: bigint): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_compressed_free: (a: number, b: number) => void;
    readonly __wbg_get_compressed_psnr: (a: number) => number;
    readonly __wbg_get_compressed_ratio: (a: number) => number;
    readonly __wbg_get_compressed_rel_error: (a: number) => number;
    readonly __wbg_set_compressed_psnr: (a: number, b: number) => void;
    readonly __wbg_set_compressed_ratio: (a: number, b: number) => void;
    readonly __wbg_set_compressed_rel_error: (a: number, b: number) => void;
    readonly algorithm_names: () => [number, number];
    readonly compress_image: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: bigint) => [number, number, number];
    readonly compressed_rgba: (a: number) => [number, number];
    readonly hilbert_curves: (a: number, b: number, c: bigint) => [number, number, number, number];
    readonly power_sweep: (a: number, b: number, c: number, d: number, e: bigint) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_drop_slice: (a: number, b: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
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

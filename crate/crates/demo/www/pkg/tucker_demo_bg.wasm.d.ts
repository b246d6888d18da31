/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_compressed_free: (a: number, b: number) => void;
export const __wbg_get_compressed_psnr: (a: number) => number;
export const __wbg_get_compressed_ratio: (a: number) => number;
export const __wbg_get_compressed_rel_error: (a: number) => number;
export const __wbg_set_compressed_psnr: (a: number, b: number) => void;
export const __wbg_set_compressed_ratio: (a: number, b: number) => void;
export const __wbg_set_compressed_rel_error: (a: number, b: number) => void;
export const algorithm_names: () => [number, number];
export const compress_image: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: bigint) => [number, number, number];
export const compressed_rgba: (a: number) => [number, number];
export const hilbert_curves: (a: number, b: number, c: bigint) => [number, number, number, number];
export const power_sweep: (a: number, b: number, c: number, d: number, e: bigint) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_drop_slice: (a: number, b: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;

/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const catalogNames: () => [number, number];
export const describe: (a: number, b: number) => [number, number, number, number];
export const excitationProfile: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const inlineProfile: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
export const phaseScan: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const radii: (a: number, b: number, c: number) => [number, number, number, number];
export const solve: (a: number, b: number, c: number, d: number, e: number, f: number, g: bigint) => [number, number, number, number];
export const phaseThreshold: (a: number) => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;

/* tslint:disable */
/* eslint-disable */

/**
 * Catalog entry names, one per line.
 */
export function catalogNames(): string;

/**
 * One-line summary of a catalog entry.
 */
export function describe(name: string): string;

/**
 * Excitation probability at `points` offsets evenly spread over `[0, max_offset]` (units of ξ).
 */
export function excitationProfile(name: string, max_offset: number, points: number): Float64Array;

/**
 * Excitation profile of an inline sequence with phases given in units of π.
 */
export function inlineProfile(pulses: number, area_pi: number, target_pi: number, phases_pi: Float64Array, max_offset: number, points: number): Float64Array;

/**
 * `|arg U21 − φ|` in units of π over area deviations `[−half_width, half_width]`; NaN where undefined.
 */
export function phaseScan(name: string, half_width: number, points: number, detuning_area: number): Float64Array;

/**
 * Phase threshold (units of π) at which a phase error reaches `infidelity`.
 */
export function phaseThreshold(infidelity: number): number;

/**
 * `[crosstalk radius, robustness radius]` in units of ξ; NaN where undefined.
 */
export function radii(name: string, threshold: number): Float64Array;

/**
 * Multistart search. Returns `[count, residual, φ2/π, …, residual, φ2/π, …]`.
 */
export function solve(pulses: number, area_pi: number, target_pi: number, n1: number, n2: number, starts: number, seed: bigint): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly catalogNames: () => [number, number];
    readonly describe: (a: number, b: number) => [number, number, number, number];
    readonly excitationProfile: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly inlineProfile: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly phaseScan: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly radii: (a: number, b: number, c: number) => [number, number, number, number];
    readonly solve: (a: number, b: number, c: number, d: number, e: number, f: number, g: bigint) => [number, number, number, number];
    readonly phaseThreshold: (a: number) => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
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

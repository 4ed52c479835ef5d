// Minimal typings for the papaparse surface used here (the upstream
// @types/papaparse package is a devDependency; this file keeps the build
// self-contained when it is unavailable).
declare module "papaparse" {
  export interface ParseError {
    type: string;
    code: string;
    message: string;
    row?: number;
  }

  export interface ParseMeta {
    delimiter: string;
    linebreak: string;
    aborted: boolean;
    fields?: string[];
    truncated: boolean;
  }

  export interface ParseResult<T> {
    data: T[];
    errors: ParseError[];
    meta: ParseMeta;
  }

  export interface ParseConfig {
    header?: boolean;
    skipEmptyLines?: boolean | "greedy";
    delimiter?: string;
  }

  export function parse<T>(input: string, config?: ParseConfig): ParseResult<T>;

  const Papa: { parse: typeof parse };
  export default Papa;
}

/** Date-span helpers for timeline bucket selection. */

export interface DateSpan {
  from: string;
  to: string;
}

function pad(n: number): number | string {
  return n < 10 ? `0${n}` : n;
}

function isoDate(d: Date): string {
  return `${d.getUTCFullYear()}-${pad(d.getUTCMonth() + 1)}-${pad(d.getUTCDate())}`;
}

/** Expand a timeline bucket label into the inclusive day span it covers.
 *
 * Accepts the three granularities the API emits: "2010" covers the year,
 * "2010-03" the calendar month (leap years included), "2010-03-05" one day.
 */
export function bucketSpan(bucket: string): DateSpan {
  const parts = bucket.split("-").map((p) => parseInt(p, 10));
  if (parts.length < 1 || parts.length > 3 || parts.some((p) => Number.isNaN(p))) {
    throw new Error(`bad bucket label: ${bucket}`);
  }
  const year = parts[0]!;
  if (parts.length === 1) {
    return { from: `${year}-01-01`, to: `${year}-12-31` };
  }
  const month = parts[1]!;
  if (parts.length === 2) {
    // Day 0 of the next month is the last day of this one.
    const last = new Date(Date.UTC(year, month, 0));
    return { from: `${year}-${pad(month)}-01`, to: isoDate(last) };
  }
  const label = `${year}-${pad(month)}-${pad(parts[2]!)}`;
  return { from: label, to: label };
}

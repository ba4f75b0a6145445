/** Hash-based routing between the home page and entity pages. */

export type Route = { page: "home" } | { page: "entity"; id: string };

export const HOME_HASH = "#/";

const ENTITY_PREFIX = "#/entity/";

export function parseHash(hash: string): Route {
  if (hash.startsWith(ENTITY_PREFIX)) {
    const id = decodeURIComponent(hash.slice(ENTITY_PREFIX.length));
    if (id) return { page: "entity", id };
  }
  return { page: "home" };
}

export function entityHash(id: string): string {
  return ENTITY_PREFIX + encodeURIComponent(id);
}

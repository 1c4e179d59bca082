import { describe, expect, it } from "vitest";

import { aliasFrequency, designAttackFrequency } from "../src/designer";

describe("carrier designer mirrors the engine arithmetic", () => {
  it("matches the engine reference points", () => {
    expect(designAttackFrequency(1000, 5200, 0)).toBe(5000);
    expect(designAttackFrequency(1000, 5200, 50)).toBe(5050);
    // tie between 5000 and 6000 resolves toward the smaller carrier
    expect(designAttackFrequency(1000, 5500, 0)).toBe(5000);
  });

  it("rejects aliases beyond Nyquist", () => {
    expect(() => designAttackFrequency(1000, 5200, 501)).toThrow();
  });

  it("round-trips: the designed carrier folds to the requested alias", () => {
    for (let alias = 0; alias <= 500; alias += 25) {
      const carrier = designAttackFrequency(1000, 5200, alias);
      expect(aliasFrequency(carrier, 1000)).toBe(alias);
    }
  });

  it("alias arithmetic reference points", () => {
    expect(aliasFrequency(2, 1000)).toBe(2);
    expect(aliasFrequency(1000, 1000)).toBe(0);
    expect(aliasFrequency(5050, 1000)).toBe(50);
  });
});

export class SchemaMismatch extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaMismatch";
  }
}

export class TrainingFailure extends Error {
  constructor(message: string) {
    super(message);
    this.name = "TrainingFailure";
  }
}

export class EmptyInput extends Error {
  constructor(message: string) {
    super(message);
    this.name = "EmptyInput";
  }
}

/** Ratio with a zero denominator against a nonzero numerator. */
export class ZeroDenominator extends Error {
  readonly field: string;

  constructor(field: string) {
    super(`zero denominator in ${field}`);
    this.name = "ZeroDenominator";
    this.field = field;
  }
}

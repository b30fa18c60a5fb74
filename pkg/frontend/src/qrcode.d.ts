declare module 'qrcode' {
  export interface BitMatrix {
    size: number;
    data: Uint8Array;
  }
  export interface QRData {
    modules: BitMatrix;
    version: number;
  }
  export interface CreateOptions {
    errorCorrectionLevel?: 'L' | 'M' | 'Q' | 'H';
  }
  export function create(text: string, options?: CreateOptions): QRData;
  export function toBuffer(text: string, options?: Record<string, unknown>): Promise<Buffer>;
  export function toString(text: string, options?: Record<string, unknown>): Promise<string>;
  const qrcode: {
    create: typeof create;
    toBuffer: typeof toBuffer;
    toString: typeof toString;
  };
  export default qrcode;
}

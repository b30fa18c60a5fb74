// Registration page: pick credentials and an identifier kind; the one-time
// provisioning payload (the only place the 2FA key is ever shown) is
// displayed as a QR code for the device to capture.

import { ApiClient, ApiError, IdentifierKind } from './api';
import { renderQrSvg } from './qr';

export function renderRegisterPage(container: HTMLElement, api: ApiClient): void {
  container.innerHTML = `
    <section class="card">
      <h1>Create account</h1>
      <form id="register-form" class="form-stack">
        <label>Username <input id="reg-username" required /></label>
        <label>Password <input id="reg-password" type="password" required /></label>
        <label>Identifier kind
          <select id="reg-kind">
            <option value="pattern" selected>pattern (draw on a grid)</option>
            <option value="qr">qr (scan a code)</option>
            <option value="numeric">numeric (type digits)</option>
          </select>
        </label>
        <button type="submit" class="primary">Register</button>
        <p id="register-error" class="error" aria-live="polite"></p>
      </form>
      <div id="provisioning" hidden></div>
    </section>
  `;

  const form = container.querySelector<HTMLFormElement>('#register-form')!;
  const errorLine = container.querySelector<HTMLParagraphElement>('#register-error')!;
  const provisioning = container.querySelector<HTMLDivElement>('#provisioning')!;

  form.addEventListener('submit', (event) => {
    event.preventDefault();
    errorLine.textContent = '';
    const username = container.querySelector<HTMLInputElement>('#reg-username')!.value.trim();
    const password = container.querySelector<HTMLInputElement>('#reg-password')!.value;
    const kind = container.querySelector<HTMLSelectElement>('#reg-kind')!.value as IdentifierKind;
    api
      .register(username, password, kind)
      .then(({ provisioning_payload }) => {
        form.hidden = true;
        provisioning.hidden = false;
        provisioning.innerHTML = `
          <h2>Enroll your device</h2>
          <p>Scan this one-time code with the device agent, then sign in once to
             confirm the enrollment. It will not be shown again.</p>
          <figure class="identifier-figure" data-kind="provisioning">${renderQrSvg(provisioning_payload)}</figure>
          <details><summary>payload as text</summary><code id="payload-text">${provisioning_payload}</code></details>
          <a href="#/login">Continue to sign in</a>
        `;
      })
      .catch((err) => {
        errorLine.textContent =
          err instanceof ApiError && err.code === 'DUPLICATE_USER'
            ? 'That username is taken.'
            : 'Registration failed. Please try again.';
      });
  });
}

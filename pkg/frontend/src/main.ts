import { bootstrap } from './app.js'

document.addEventListener('DOMContentLoaded', () => {
  const root = document.getElementById('keyboard')
  if (root) {
    bootstrap(root)
  }
})
